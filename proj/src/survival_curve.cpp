#include "tcsurv/survival_curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tcsurv/errors.hpp"

namespace tcsurv {

void SurvivalCurve::validate() const {
    if (times.size() != probs.size()) throw DomainError("curve: times/probs size mismatch");
    double prev_t = -std::numeric_limits<double>::infinity();
    double prev_p = 1.0;
    for (std::size_t j = 0; j < times.size(); ++j) {
        if (!std::isfinite(times[j]) || times[j] < 0.0)
            throw DomainError("curve: jump times must be finite and >= 0");
        if (times[j] <= prev_t) throw DomainError("curve: jump times must be strictly increasing");
        if (std::isnan(probs[j]) || probs[j] < 0.0 || probs[j] > prev_p + 1e-15)
            throw DomainError("curve: probs must be nonincreasing within [0,1]");
        prev_t = times[j];
        prev_p = probs[j];
    }
}

double SurvivalCurve::value(double t) const {
    // Largest j with times[j] <= t.
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return 1.0;
    return probs[static_cast<std::size_t>(it - times.begin()) - 1];
}

double SurvivalCurve::left_limit(double t) const {
    auto it = std::lower_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return 1.0;
    return probs[static_cast<std::size_t>(it - times.begin()) - 1];
}

QuantileResult SurvivalCurve::quantile_ex(double p) const {
    if (std::isnan(p) || p < 0.0 || p > 1.0)
        throw DomainError("quantile: level must be in [0,1]");
    if (p >= 1.0) return {0.0, false};  // S(0) <= 1 always
    // probs is nonincreasing; find the first index with probs[j] <= p.
    auto it = std::lower_bound(probs.begin(), probs.end(), p,
                               [](double prob, double level) { return prob > level; });
    if (it == probs.end()) {
        if (times.empty()) return {std::numeric_limits<double>::infinity(), true};
        return {times.back(), true};
    }
    return {times[static_cast<std::size_t>(it - probs.begin())], false};
}

HazardIncrements hazard_increments(const SurvivalCurve& curve) {
    constexpr double kFloor = 1e-12;
    HazardIncrements out;
    out.times = curve.times;
    out.dLambda.resize(curve.times.size());
    double prev = 1.0;
    for (std::size_t j = 0; j < curve.times.size(); ++j) {
        const double cur = curve.probs[j];
        if (prev <= 0.0) {
            if (cur < prev) throw DomainError("hazard_increments: jump from exactly 0");
            out.dLambda[j] = 0.0;
        } else {
            out.dLambda[j] = (prev - cur) / std::max(prev, kFloor);
        }
        prev = cur;
    }
    return out;
}

std::vector<double> reconstruct_probs(const HazardIncrements& inc) {
    std::vector<double> out(inc.dLambda.size());
    double s = 1.0;
    for (std::size_t j = 0; j < inc.dLambda.size(); ++j) {
        s *= 1.0 - inc.dLambda[j];
        out[j] = s;
    }
    return out;
}

}  // namespace tcsurv
