#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tcsurv/calibrate.hpp"
#include "tcsurv/simgen.hpp"

namespace tcsurv {

// Metrics of one fitted LPB on one test set.
struct RunMetrics {
    std::size_t rep = 0;
    double empirical_coverage = 0.0;  // mean 1{T_i > L(W_i)}
    double average_lpb = 0.0;
    double true_coverage = 0.0;  // MC oracle; NaN outside simulations
    std::optional<double> selected_tau;
    std::size_t n_train = 0, n_cal = 0, n_test = 0;
    std::uint64_t seed = 0;
};

struct WilsonInterval {
    double lo = 0.0;
    double hi = 0.0;
};

// Wilson score interval for a binomial proportion at the given two-sided
// confidence level.
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double level);

RunMetrics evaluate(const LpbFunction& lpb, std::span<const FullRecord> test);

// Which fitter backs each nuisance in the replication harness.
enum class FitterChoice { auto_choice, km, beran, cox, weibull };

struct ReplicationConfig {
    SettingSpec setting;
    std::size_t n = 1000;  // per part; each replicate generates 3n records
    std::size_t reps = 100;
    SelectionRule rule = SelectionRule::apac;
    double alpha = 0.1;
    double beta = 0.05;
    double eta2 = 1e-3;
    std::size_t grid_size = 100;
    double grid_max = 0.99;
    // auto: Beran for p = 1, Cox (event) / Weibull (censoring) otherwise.
    FitterChoice s_fitter = FitterChoice::auto_choice;
    FitterChoice g_fitter = FitterChoice::auto_choice;
    double bandwidth = 0.0;  // <= 0 -> default rule per replicate
    std::uint64_t base_seed = 1;
    std::size_t n_mc = 100000;
    int jobs = 1;
};

// Study-level aggregate for one per-part size n.
struct ReplicationStudy {
    std::size_t n = 0;
    std::size_t reps = 0;
    std::size_t failures = 0;
    double proportion = 0.0;  // fraction of ok replicates with true coverage >= 1 - alpha
    WilsonInterval wilson;    // 95% interval for the proportion
    double mean_true_coverage = 0.0;
    double mean_empirical_coverage = 0.0;
    double mean_average_lpb = 0.0;
    std::vector<RunMetrics> metrics;            // ok replicates, sorted by rep
    std::vector<std::string> failure_messages;  // one per failed replicate
};

// Runs `reps` independent replicates (generate 3n, fit, sweep, select,
// evaluate + oracle), fully deterministic in (setting, n, reps, base_seed)
// and independent of the worker count.
ReplicationStudy run_replications(const ReplicationConfig& config);

// The proportion-vs-n study: one run_replications per requested n.
struct ProportionStudy {
    int setting_id = 0;
    std::vector<std::size_t> n_values;
    std::size_t reps = 0;
    double alpha = 0.1;
    double beta = 0.05;
    std::vector<ReplicationStudy> per_n;
};

ProportionStudy proportion_study(ReplicationConfig config, std::span<const std::size_t> n_values);

}  // namespace tcsurv
