#include "tcsurv/simgen.hpp"

#include <cmath>

#include "tcsurv/errors.hpp"
#include "tcsurv/stats.hpp"

namespace tcsurv {

SettingSpec SettingSpec::preset(int id) {
    if (id < 1 || id > 6) throw ConfigError("unknown setting id " + std::to_string(id));
    SettingSpec s;
    s.id = id;
    s.p = (id <= 4) ? 1 : 10;
    return s;
}

double SettingSpec::mu(std::span<const double> w) const {
    switch (id) {
        case 1:
            return 0.632 * w[0];
        case 2:
            return w[0] > 2.0 ? 3.0 : w[0];
        case 3:
            return w[0] > 2.0 ? 2.0 : w[0];
        case 4:
            return w[0] > 2.0 ? 3.0 : 1.5 * w[0];
        case 5:
        case 6:
            return 0.126 * (w[0] + std::sqrt(w[2] * w[4])) + 1.0;
        default:
            throw ConfigError("unknown setting id " + std::to_string(id));
    }
}

double SettingSpec::sigma(std::span<const double> w) const {
    if (sigma_override) return *sigma_override;
    switch (id) {
        case 1:
            return 2.0;
        case 2:
        case 3:
        case 4:
            return 0.5;
        case 5:
            return 1.0;
        case 6:
            return (w[1] + 2.0) / 4.0;
        default:
            throw ConfigError("unknown setting id " + std::to_string(id));
    }
}

namespace {

double as_rate(double theta, bool exp_as_mean) { return exp_as_mean ? 1.0 / theta : theta; }

// Censoring-law parameters per setting: (kind, theta) with kind 0 an
// exponential rate and kind 1 a log-normal (m, v) pair.
struct CensorLaw {
    bool lognormal = false;
    double a = 0.0;  // rate, or log-normal location
    double b = 0.0;  // log-normal variance
};

CensorLaw censor_law(const SettingSpec& s, std::span<const double> w) {
    CensorLaw law;
    switch (s.id) {
        case 1:
        case 2:
            law.a = 0.1;
            break;
        case 3:
            law.a = 0.25 + (6.0 + w[0]) / 100.0;
            break;
        case 4:
            law.lognormal = true;
            law.a = 2.0 + (2.0 - w[0]) / 50.0;
            law.b = 0.5;  // variance
            break;
        case 5:
        case 6:
            law.a = w[9] / 10.0 + 1.0 / 20.0;
            break;
        default:
            throw ConfigError("unknown setting id " + std::to_string(s.id));
    }
    return law;
}

}  // namespace

double SettingSpec::draw_censoring(std::span<const double> w, RngStream& rng) const {
    const CensorLaw law = censor_law(*this, w);
    if (law.lognormal) return rng.lognormal(law.a, std::sqrt(law.b));
    return rng.exponential(as_rate(law.a, exp_as_mean));
}

double SettingSpec::censoring_survival(double t, std::span<const double> w) const {
    if (t < 0.0) throw DomainError("censoring_survival: t must be >= 0");
    const CensorLaw law = censor_law(*this, w);
    if (law.lognormal) {
        if (t == 0.0) return 1.0;
        return 1.0 - norm_cdf((std::log(t) - law.a) / std::sqrt(law.b));
    }
    return std::exp(-as_rate(law.a, exp_as_mean) * t);
}

std::vector<FullRecord> generate(const SettingSpec& setting, std::size_t n, RngStream& rng) {
    if (n < 1) throw DomainError("generate: n must be >= 1");
    if (setting.id < 1 || setting.id > 6)
        throw ConfigError("unknown setting id " + std::to_string(setting.id));
    std::vector<FullRecord> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        FullRecord r;
        r.w.resize(static_cast<std::size_t>(setting.p));
        for (auto& v : r.w) v = rng.uniform(0.0, 4.0);
        const double s = setting.sigma(r.w);
        r.t = std::exp(setting.mu(r.w) + s * rng.normal());
        r.c = setting.draw_censoring(r.w, rng);
        out.push_back(std::move(r));
    }
    return out;
}

double true_conditional_survival(const SettingSpec& setting, double t,
                                 std::span<const double> w) {
    if (t < 0.0) throw DomainError("true_conditional_survival: t must be >= 0");
    if (t == 0.0) return 1.0;
    const double s = setting.sigma(w);
    const double m = setting.mu(w);
    if (s == 0.0) return std::log(t) < m ? 1.0 : 0.0;
    return 1.0 - norm_cdf((std::log(t) - m) / s);
}

double true_coverage(const SettingSpec& setting, const LpbFn& lpb, std::size_t n_mc,
                     RngStream& rng) {
    if (n_mc < 1000) throw DomainError("true_coverage: n_mc must be >= 1000");
    std::vector<double> w(static_cast<std::size_t>(setting.p));
    std::size_t covered = 0;
    for (std::size_t i = 0; i < n_mc; ++i) {
        for (auto& v : w) v = rng.uniform(0.0, 4.0);
        const double t = std::exp(setting.mu(w) + setting.sigma(w) * rng.normal());
        if (t > lpb(w)) ++covered;
    }
    return static_cast<double>(covered) / static_cast<double>(n_mc);
}

}  // namespace tcsurv
