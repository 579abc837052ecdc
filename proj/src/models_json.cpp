#include <nlohmann/json.hpp>

#include "tcsurv/errors.hpp"
#include "tcsurv/models.hpp"

namespace tcsurv {

using nlohmann::json;

std::string to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::km: return "km";
        case ModelKind::beran: return "beran";
        case ModelKind::cox: return "cox";
        case ModelKind::weibull: return "weibull";
    }
    return "?";
}

std::string to_string(Role role) { return role == Role::event ? "event" : "censoring"; }

namespace {

Role role_from_string(const std::string& s) {
    if (s == "event") return Role::event;
    if (s == "censoring") return Role::censoring;
    throw ConfigError("unknown role '" + s + "'");
}

}  // namespace

json KmModel::to_json() const {
    return json{{"kind", "km"},
                {"role", to_string(role_)},
                {"p", p_},
                {"times", curve_.times},
                {"probs", curve_.probs}};
}

json BeranModel::to_json() const {
    return json{{"kind", "beran"},
                {"role", to_string(role_)},
                {"bandwidth", bandwidth_},
                {"w", w_},
                {"y", y_},
                {"event", event_}};
}

json CoxModel::to_json() const {
    return json{{"kind", "cox"},
                {"role", to_string(role_)},
                {"beta", beta_},
                {"baseline_times", times_},
                {"baseline_hazard", dH0_}};
}

json WeibullModel::to_json() const {
    return json{{"kind", "weibull"},
                {"role", to_string(role_)},
                {"intercept", intercept_},
                {"beta", beta_},
                {"shape", shape_},
                {"grid", grid_}};
}

std::unique_ptr<ConditionalSurvivalModel> ConditionalSurvivalModel::from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const Role role = role_from_string(j.at("role").get<std::string>());
    if (kind == "km") {
        auto m = std::unique_ptr<KmModel>(new KmModel(role));
        m->p_ = j.at("p").get<int>();
        m->curve_.times = j.at("times").get<std::vector<double>>();
        m->curve_.probs = j.at("probs").get<std::vector<double>>();
        m->curve_.validate();
        return m;
    }
    if (kind == "beran") {
        auto m = std::unique_ptr<BeranModel>(new BeranModel(role));
        m->bandwidth_ = j.at("bandwidth").get<double>();
        m->w_ = j.at("w").get<std::vector<double>>();
        m->y_ = j.at("y").get<std::vector<double>>();
        m->event_ = j.at("event").get<std::vector<int>>();
        if (m->w_.size() != m->y_.size() || m->w_.size() != m->event_.size())
            throw ConfigError("beran model: column length mismatch");
        if (!(m->bandwidth_ > 0.0)) throw ConfigError("beran model: bandwidth must be positive");
        return m;
    }
    if (kind == "cox") {
        auto m = std::unique_ptr<CoxModel>(new CoxModel(role));
        m->beta_ = j.at("beta").get<std::vector<double>>();
        m->times_ = j.at("baseline_times").get<std::vector<double>>();
        m->dH0_ = j.at("baseline_hazard").get<std::vector<double>>();
        if (m->times_.size() != m->dH0_.size())
            throw ConfigError("cox model: baseline length mismatch");
        m->log_s0_.resize(m->dH0_.size());
        double acc = 0.0;
        for (std::size_t k = 0; k < m->dH0_.size(); ++k) {
            const double h = m->dH0_[k];
            if (!(h >= 0.0 && h <= 1.0)) throw ConfigError("cox model: dH0 outside [0,1]");
            acc += std::log1p(-h);
            m->log_s0_[k] = acc;
        }
        return m;
    }
    if (kind == "weibull") {
        auto m = std::unique_ptr<WeibullModel>(new WeibullModel(role));
        m->intercept_ = j.at("intercept").get<double>();
        m->beta_ = j.at("beta").get<std::vector<double>>();
        m->shape_ = j.at("shape").get<double>();
        m->grid_ = j.at("grid").get<std::vector<double>>();
        if (!(m->shape_ > 0.0)) throw ConfigError("weibull model: shape must be positive");
        return m;
    }
    throw ConfigError("unknown model kind '" + kind + "'");
}

}  // namespace tcsurv
