#include "tcsurv/onestep.hpp"

#include <algorithm>
#include <cmath>

#include "tcsurv/errors.hpp"
#include "tcsurv/stats.hpp"

namespace tcsurv {

namespace {
constexpr double kFloor = 1e-12;
}

PhiEvaluator::PhiEvaluator(SurvivalCurve s_curve, SurvivalCurve g_curve, double y, int delta)
    : s_curve_(std::move(s_curve)), g_curve_(std::move(g_curve)), y_(y), delta_(delta) {
    const HazardIncrements inc = hazard_increments(s_curve_);
    const std::size_t m = inc.times.size();

    // Sum terms are floored at 1e-12 before division (they stay bounded in
    // phi because the S(L|w) factor in front shrinks at least as fast).
    presum_.resize(m + 1);
    presum_[0] = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        const double dl = inc.dLambda[j];
        double term = 0.0;
        if (inc.times[j] > 0.0 && dl > 0.0) {
            const double denom =
                std::max(s_curve_.probs[j] * g_curve_.value(inc.times[j]), kFloor);
            term = dl / denom;
        }
        presum_[j + 1] = presum_[j] + term;
    }

    // The indicator term is the one place a sub-floor denominator means the
    // eta2 cap was bypassed; that is an error, not data.
    indicator_term_ = 0.0;
    if (delta_ == 1) {
        const double denom = s_curve_.value(y_) * g_curve_.value(y_);
        if (denom < kFloor)
            indicator_guard_ = true;
        else
            indicator_term_ = 1.0 / denom;
    }
}

double PhiEvaluator::lpb(double tau, double eta2) const {
    const double sq = s_curve_.quantile(1.0 - tau);
    const double cap = g_curve_.quantile(eta2);
    return sq < cap ? sq : cap;
}

double PhiEvaluator::phi(double lpb_value) const {
    const double s_l = s_curve_.value(lpb_value);
    if (s_l <= 0.0) return 0.0;

    const double m = std::min(lpb_value, y_);
    // Number of jumps with t_j <= m; jumps at exactly 0 carry no hazard
    // mass in (0, L^y] and were skipped when building the prefix sums.
    const auto& times = s_curve_.times;
    const std::size_t k = static_cast<std::size_t>(
        std::upper_bound(times.begin(), times.end(), m) - times.begin());
    const double sum = presum_[k];

    double a = 0.0;
    if (delta_ == 1 && y_ <= lpb_value) {
        if (indicator_guard_) throw NumericGuardError(y_, "indicator term");
        a = indicator_term_;
    }
    return s_l * (1.0 - (a - sum));
}

double phi(const EifContext& ctx, const ObservedRecord& o) {
    PhiEvaluator ev(ctx.s_model->curve(o.w), ctx.g_model->curve(o.w), o.y, o.delta);
    return ev.phi(ctx.lpb.from_curves(ev.s_curve(), ev.g_curve()));
}

CoverageReport one_step(const EifContext& ctx, std::span<const ObservedRecord> cal,
                        double beta) {
    if (cal.empty()) throw SizeError("one_step: calibration set is empty");
    const std::size_t n = cal.size();

    std::vector<double> phis(n), s_at_l(n);
    for (std::size_t i = 0; i < n; ++i) {
        PhiEvaluator ev(ctx.s_model->curve(cal[i].w), ctx.g_model->curve(cal[i].w), cal[i].y,
                        cal[i].delta);
        const double l = ev.lpb(ctx.lpb.tau, ctx.lpb.eta2);
        phis[i] = ev.phi(l);
        s_at_l[i] = ev.s_at_lpb(l);
    }

    CoverageReport rep;
    rep.tau = ctx.lpb.tau;
    rep.n_cal = n;
    rep.psi_hat = mean(phis);
    rep.plug_in = mean(s_at_l);
    std::vector<double> sq(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = phis[i] - rep.plug_in;
        sq[i] = d * d;
    }
    rep.sigma_hat = std::sqrt(mean(sq));
    rep.clb = rep.psi_hat - z_upper(beta) * rep.sigma_hat / std::sqrt(static_cast<double>(n));
    return rep;
}

namespace {

// Gauss-Legendre 4-point nodes/weights on [-1, 1].
constexpr double kGlNode[4] = {-0.8611363115940526, -0.3399810435848563,
                               0.3399810435848563, 0.8611363115940526};
constexpr double kGlWeight[4] = {0.3478548451374538, 0.6521451548625461,
                                 0.6521451548625461, 0.3478548451374538};

double lognormal_pdf(double u, double mu, double sigma) {
    if (u <= 0.0) return 0.0;
    const double z = (std::log(u) - mu) / sigma;
    return std::exp(-0.5 * z * z) / (u * sigma * 2.5066282746310005024);
}

// Int over (0, L] of (S0(u-)/S(u)) (G0(u)/G(u) - 1) d(Lambda - Lambda0)(u|w),
// with S, G step curves and the truth continuous: the Lambda atoms sit on
// the S grid and the -Lambda0 part integrates piecewise between grid
// breaks, where S0 dLambda0 = f0 du.
double remainder_integral(const SurvivalCurve& s_curve, const SurvivalCurve& g_curve,
                          double l_value, std::span<const double> w,
                          const SettingSpec& setting) {
    const double mu = setting.mu(w);
    const double sg = setting.sigma(w);

    const HazardIncrements inc = hazard_increments(s_curve);
    double atoms = 0.0;
    for (std::size_t j = 0; j < inc.times.size(); ++j) {
        const double t = inc.times[j];
        if (t <= 0.0 || t > l_value || inc.dLambda[j] == 0.0) continue;
        const double s = s_curve.probs[j];
        const double g = g_curve.value(t);
        if (s < kFloor || g < kFloor) throw NumericGuardError(t, "remainder atom");
        const double s0 = true_conditional_survival(setting, t, w);
        const double g0 = setting.censoring_survival(t, w);
        atoms += (s0 / s) * (g0 / g - 1.0) * inc.dLambda[j];
    }

    // Merged breakpoints of both step curves inside (0, L].
    std::vector<double> brk;
    brk.push_back(0.0);
    for (double t : s_curve.times)
        if (t > 0.0 && t < l_value) brk.push_back(t);
    for (double t : g_curve.times)
        if (t > 0.0 && t < l_value) brk.push_back(t);
    brk.push_back(l_value);
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());

    double cont = 0.0;
    for (std::size_t j = 0; j + 1 < brk.size(); ++j) {
        const double a = brk[j], b = brk[j + 1];
        const double mid = 0.5 * (a + b);
        const double s = s_curve.value(mid);
        const double g = g_curve.value(mid);
        if (s < kFloor || g < kFloor) throw NumericGuardError(mid, "remainder piece");
        const double half = 0.5 * (b - a);
        double piece = 0.0;
        for (int q = 0; q < 4; ++q) {
            const double u = mid + half * kGlNode[q];
            const double g0 = setting.censoring_survival(u, w);
            piece += kGlWeight[q] * lognormal_pdf(u, mu, sg) * (g0 / g - 1.0);
        }
        cont += piece * half / s;
    }
    return atoms - cont;
}

}  // namespace

RemainderEstimate remainder_identity(const ConditionalSurvivalModel& s_model,
                                   const ConditionalSurvivalModel& g_model,
                                   const LpbFunction& lpb, const SettingSpec& true_setting,
                                   std::size_t n_mc, RngStream& rng) {
    if (n_mc < 1000) throw DomainError("remainder_identity: n_mc must be >= 1000");

    std::vector<double> lhs(n_mc), rhs(n_mc), diff(n_mc);
    std::vector<double> w(static_cast<std::size_t>(true_setting.p));
    for (std::size_t i = 0; i < n_mc; ++i) {
        for (auto& v : w) v = rng.uniform(0.0, 4.0);
        const double t = std::exp(true_setting.mu(w) + true_setting.sigma(w) * rng.normal());
        const double c = true_setting.draw_censoring(w, rng);
        const double y = std::min(t, c);
        const int delta = t <= c ? 1 : 0;

        PhiEvaluator ev(s_model.curve(w), g_model.curve(w), y, delta);
        const double l = lpb.from_curves(ev.s_curve(), ev.g_curve());
        const double phi_i = ev.phi(l);
        const double psi0_i = true_conditional_survival(true_setting, l, w);
        lhs[i] = phi_i - psi0_i;

        const double s_l = ev.s_curve().value(l);
        rhs[i] = s_l <= 0.0
                     ? 0.0
                     : s_l * remainder_integral(ev.s_curve(), ev.g_curve(), l, w, true_setting);
        diff[i] = lhs[i] - rhs[i];
    }

    RemainderEstimate out;
    out.lhs = mean(lhs);
    out.rhs = mean(rhs);
    const double n = static_cast<double>(n_mc);
    auto se = [&](std::span<const double> x, double m) {
        double acc = 0.0;
        for (double v : x) acc += (v - m) * (v - m);
        return std::sqrt(acc / (n - 1.0) / n);
    };
    out.se_lhs = se(lhs, out.lhs);
    out.se_rhs = se(rhs, out.rhs);
    out.se_diff = se(diff, out.lhs - out.rhs);
    return out;
}

}  // namespace tcsurv
