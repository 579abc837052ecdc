#include "tcsurv/calibrate.hpp"

#include <algorithm>
#include <cmath>

#include "tcsurv/errors.hpp"
#include "tcsurv/parallel.hpp"
#include "tcsurv/stats.hpp"

namespace tcsurv {

TauGrid TauGrid::uniform(std::size_t count, double max) {
    if (count == 0) throw DomainError("tau grid: count must be >= 1");
    if (!(max >= 0.0 && max < 1.0)) throw DomainError("tau grid: max must be in [0,1)");
    TauGrid g;
    g.values.resize(count);
    if (count == 1) {
        g.values[0] = 0.0;
    } else {
        for (std::size_t k = 0; k < count; ++k)
            g.values[k] = max * static_cast<double>(k) / static_cast<double>(count - 1);
    }
    return g;
}

void TauGrid::validate() const {
    if (values.empty()) throw DomainError("tau grid: empty");
    double prev = -1.0;
    for (double v : values) {
        if (!(v >= 0.0 && v < 1.0)) throw DomainError("tau grid: values must be in [0,1)");
        if (v <= prev) throw DomainError("tau grid: values must be increasing");
        prev = v;
    }
}

LpbFunction make_lpb(const ConditionalSurvivalModel& s_model,
                     const ConditionalSurvivalModel& g_model, double tau, double eta2) {
    if (!(tau >= 0.0 && tau < 1.0)) throw DomainError("make_lpb: tau must be in [0,1)");
    if (!(eta2 > 0.0 && eta2 < 1.0)) throw DomainError("make_lpb: eta2 must be in (0,1)");
    return LpbFunction{tau, eta2, &s_model, &g_model};
}

std::vector<CoverageReport> sweep(const NuisancePair& nuisances,
                                  std::span<const ObservedRecord> cal, const TauGrid& grid,
                                  double beta, int jobs) {
    grid.validate();
    if (cal.empty()) throw SizeError("sweep: calibration set is empty");
    const std::size_t n = cal.size();

    // Curves and hazard prefix sums depend on w only; hoist them out of
    // the tau loop.
    std::vector<PhiEvaluator> evals;
    evals.reserve(n);
    for (const auto& o : cal)
        evals.emplace_back(nuisances.s_model->curve(o.w), nuisances.g_model->curve(o.w), o.y,
                           o.delta);

    const double z = z_upper(beta);
    std::vector<CoverageReport> reports(grid.values.size());
    parallel_for(grid.values.size(), jobs, [&](std::size_t k) {
        const double tau = grid.values[k];
        std::vector<double> phis(n), s_at_l(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double l = evals[i].lpb(tau, nuisances.eta2);
            phis[i] = evals[i].phi(l);
            s_at_l[i] = evals[i].s_at_lpb(l);
        }
        CoverageReport rep;
        rep.tau = tau;
        rep.n_cal = n;
        rep.psi_hat = mean(phis);
        rep.plug_in = mean(s_at_l);
        std::vector<double> sq(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double d = phis[i] - rep.plug_in;
            sq[i] = d * d;
        }
        rep.sigma_hat = std::sqrt(mean(sq));
        rep.clb = rep.psi_hat - z * rep.sigma_hat / std::sqrt(static_cast<double>(n));
        reports[k] = rep;
    });
    return reports;
}

namespace {

CalibrationResult select_impl(std::vector<CoverageReport> reports, double alpha, double beta,
                              SelectionRule rule) {
    if (reports.empty()) throw SizeError("select: no reports");
    std::sort(reports.begin(), reports.end(),
              [](const CoverageReport& a, const CoverageReport& b) { return a.tau < b.tau; });

    CalibrationResult out;
    out.rule = rule;
    out.alpha = alpha;
    out.beta = beta;

    const double target = 1.0 - alpha;
    const double z = rule == SelectionRule::apac ? z_upper(beta) : 0.0;
    for (const auto& rep : reports) {
        const double bound =
            rule == SelectionRule::apac
                ? rep.psi_hat - z * rep.sigma_hat / std::sqrt(static_cast<double>(rep.n_cal))
                : rep.psi_hat;
        if (bound >= target)
            out.selected_tau = rep.tau;  // prefix still intact; keep extending
        else
            break;  // prefix property broken; nothing larger qualifies
    }
    out.reports = std::move(reports);
    return out;
}

}  // namespace

CalibrationResult select_apac(std::vector<CoverageReport> reports, double alpha, double beta) {
    return select_impl(std::move(reports), alpha, beta, SelectionRule::apac);
}

CalibrationResult select_marginal(std::vector<CoverageReport> reports, double alpha) {
    return select_impl(std::move(reports), alpha, 0.0, SelectionRule::marginal);
}

LpbFunction finalize(const CalibrationResult& result, const NuisancePair& nuisances,
                     bool fallback_zero) {
    if (result.selected_tau)
        return make_lpb(*nuisances.s_model, *nuisances.g_model, *result.selected_tau,
                        nuisances.eta2);
    if (fallback_zero)
        return make_lpb(*nuisances.s_model, *nuisances.g_model, 0.0, nuisances.eta2);
    throw NoSelectionError("no tau satisfied the selection rule and fallback is disabled");
}

}  // namespace tcsurv
