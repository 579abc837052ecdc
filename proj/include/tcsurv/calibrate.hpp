#pragma once

#include <optional>
#include <span>
#include <vector>

#include "tcsurv/lpb.hpp"
#include "tcsurv/onestep.hpp"

namespace tcsurv {

// Candidate tuning parameters, increasing, within [0, 1).
struct TauGrid {
    std::vector<double> values;

    // count uniformly spaced values covering [0, max].
    static TauGrid uniform(std::size_t count = 100, double max = 0.99);
    void validate() const;
};

enum class SelectionRule { apac, marginal };

struct CalibrationResult {
    std::optional<double> selected_tau;
    std::vector<CoverageReport> reports;  // sorted by tau
    SelectionRule rule = SelectionRule::apac;
    double alpha = 0.1;
    double beta = 0.05;
};

// The two nuisance models sharing one eta2 cap.
struct NuisancePair {
    const ConditionalSurvivalModel* s_model = nullptr;
    const ConditionalSurvivalModel* g_model = nullptr;
    double eta2 = 1e-3;
};

LpbFunction make_lpb(const ConditionalSurvivalModel& s_model,
                     const ConditionalSurvivalModel& g_model, double tau, double eta2);

// One CoverageReport per grid value, all from the same fitted nuisances
// and the same calibration records. jobs > 1 parallelizes across the
// grid; results are identical to the serial order.
std::vector<CoverageReport> sweep(const NuisancePair& nuisances,
                                  std::span<const ObservedRecord> cal, const TauGrid& grid,
                                  double beta, int jobs = 1);

// tau_hat = max{ tau : CLB(tau') >= 1 - alpha for every grid tau' <= tau },
// where the CLB is recomputed as psi_hat - z_beta sigma_hat / sqrt(n).
CalibrationResult select_apac(std::vector<CoverageReport> reports, double alpha, double beta);

// Marginal variant: the bound is psi_hat >= 1 - alpha, no variance term.
CalibrationResult select_marginal(std::vector<CoverageReport> reports, double alpha);

// Turn a selection into an LPB. With no selected tau: tau = 0 (so L == 0)
// when fallback_zero is set, NoSelectionError otherwise.
LpbFunction finalize(const CalibrationResult& result, const NuisancePair& nuisances,
                     bool fallback_zero);

}  // namespace tcsurv
