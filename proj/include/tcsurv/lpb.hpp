#pragma once

#include <span>

#include "tcsurv/models.hpp"
#include "tcsurv/survival_curve.hpp"

namespace tcsurv {

// Capped-quantile lower prediction bound
//   L(w) = min( S^{-1}(1 - tau | w), G^{-1}(eta2 | w) ).
// Non-owning: the nuisance models must outlive the function object.
struct LpbFunction {
    double tau = 0.0;
    double eta2 = 1e-3;
    const ConditionalSurvivalModel* s_model = nullptr;
    const ConditionalSurvivalModel* g_model = nullptr;

    double operator()(std::span<const double> w) const {
        return from_curves(s_model->curve(w), g_model->curve(w));
    }

    // Same rule evaluated on precomputed curves for the given w.
    double from_curves(const SurvivalCurve& s_curve, const SurvivalCurve& g_curve) const {
        const double sq = s_curve.quantile(1.0 - tau);
        const double cap = g_curve.quantile(eta2);
        return sq < cap ? sq : cap;
    }
};

}  // namespace tcsurv
