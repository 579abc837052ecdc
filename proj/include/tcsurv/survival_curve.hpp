#pragma once

#include <vector>

namespace tcsurv {

struct QuantileResult {
    double t = 0.0;
    bool saturated = false;  // curve never drops to the requested level
};

// Right-continuous nonincreasing step function with S(t) = 1 before the
// first jump time. probs[j] is the value S(times[j]) from times[j] up to
// (but excluding) times[j+1].
struct SurvivalCurve {
    std::vector<double> times;  // strictly increasing, >= 0
    std::vector<double> probs;  // 1 >= probs[0] >= ... >= 0

    // Throws DomainError if the invariants above are violated.
    void validate() const;

    double value(double t) const;       // S(t)
    double left_limit(double t) const;  // S(t-)

    // Generalized inverse inf{t >= 0 : S(t) <= p}. If the curve floors
    // above p the result saturates at the last grid time (+infinity when
    // the grid is empty — the infimum of an empty set).
    QuantileResult quantile_ex(double p) const;
    double quantile(double p) const { return quantile_ex(p).t; }
};

// Per-jump cumulative-hazard increments dLambda_j = (S(t-) - S(t)) / S(t-),
// with the product integral prod(1 - dLambda_j) reproducing the curve.
struct HazardIncrements {
    std::vector<double> times;
    std::vector<double> dLambda;
};

HazardIncrements hazard_increments(const SurvivalCurve& curve);

// Product-integral reconstruction of the survival values at the jump grid.
std::vector<double> reconstruct_probs(const HazardIncrements& inc);

}  // namespace tcsurv
