#pragma once

#include <span>
#include <vector>

#include "tcsurv/dataset.hpp"
#include "tcsurv/lpb.hpp"
#include "tcsurv/simgen.hpp"
#include "tcsurv/survival_curve.hpp"

namespace tcsurv {

// Everything phi needs: nuisance models (fit on the training part only)
// and the LPB they induce.
struct EifContext {
    const ConditionalSurvivalModel* s_model = nullptr;
    const ConditionalSurvivalModel* g_model = nullptr;
    LpbFunction lpb;
};

// One-step coverage estimate for a single tau.
struct CoverageReport {
    double tau = 0.0;
    double psi_hat = 0.0;    // mean of phi over the calibration set
    double plug_in = 0.0;    // mean of S(L(W)|W)
    double sigma_hat = 0.0;  // sqrt of mean (phi - plug_in)^2
    double clb = 0.0;        // psi_hat - z_beta * sigma_hat / sqrt(n)
    std::size_t n_cal = 0;
};

// Uncentered efficient influence function
//   phi = S(L|w) * [ 1 - ( 1{y<=L, d=1} / (S(y|w) G(y|w))
//                          - sum_{0 < t_j <= L^y} dLambda_j / (S(t_j|w) G(t_j|w)) ) ],
// with dLambda the hazard increments of the S-curve at w and the sum over
// the half-open interval (0, L^y]. All denominators are floored at 1e-12;
// an indicator hit whose denominator is below the floor raises
// NumericGuardError instead (that means the eta2 cap was bypassed).
double phi(const EifContext& ctx, const ObservedRecord& o);

// Precomputed per-record state so a tau sweep can reuse curves and the
// hazard prefix sums. Evaluation is pure given the record.
class PhiEvaluator {
public:
    PhiEvaluator(SurvivalCurve s_curve, SurvivalCurve g_curve, double y, int delta);

    // S- and G-curve quantiles for the LPB at this record's covariates.
    double lpb(double tau, double eta2) const;

    double s_at_lpb(double lpb_value) const { return s_curve_.value(lpb_value); }
    double phi(double lpb_value) const;

    const SurvivalCurve& s_curve() const { return s_curve_; }
    const SurvivalCurve& g_curve() const { return g_curve_; }

private:
    SurvivalCurve s_curve_;
    SurvivalCurve g_curve_;
    double y_;
    int delta_;
    double indicator_term_;          // 1/(S(y)G(y)) when usable
    bool indicator_guard_ = false;   // the above hit the floor
    std::vector<double> presum_;     // prefix sums of dLambda_j/(S_j G_j), t_j > 0
};

// Split one-step estimator: psi_hat = mean phi; the report also carries
// the plug-in, the variance estimate and the (1-beta) Wald lower bound.
CoverageReport one_step(const EifContext& ctx, std::span<const ObservedRecord> cal,
                        double beta);

// Both sides of the second-order remainder identity
//   E0[phi(S,G;L)] - Psi(P0;L)
//     = E0[ S(L(W)|W) Int (S0(u-)/S(u)) (G0(u)/G(u) - 1) (Lambda - Lambda0)(du|W) ],
// estimated on a common Monte-Carlo stream from the closed-form setting
// law (lhs fully by simulation, rhs by per-draw exact step/quadrature
// integration over u).
struct RemainderEstimate {
    double lhs = 0.0;
    double rhs = 0.0;
    double se_lhs = 0.0;
    double se_rhs = 0.0;
    double se_diff = 0.0;  // paired standard error of lhs - rhs
};

RemainderEstimate remainder_identity(const ConditionalSurvivalModel& s_model,
                                   const ConditionalSurvivalModel& g_model,
                                   const LpbFunction& lpb, const SettingSpec& true_setting,
                                   std::size_t n_mc, RngStream& rng);

}  // namespace tcsurv
