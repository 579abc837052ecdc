#include "tcsurv/bench.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

#include "tcsurv/errors.hpp"
#include "tcsurv/parallel.hpp"
#include "tcsurv/stats.hpp"

namespace tcsurv {

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double level) {
    if (trials < 1) throw DomainError("wilson_interval: trials must be >= 1");
    if (successes > trials) throw DomainError("wilson_interval: successes > trials");
    if (!(level > 0.0 && level < 1.0)) throw DomainError("wilson_interval: level in (0,1)");

    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z = norm_quantile(0.5 + level / 2.0);
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    WilsonInterval out{std::max(0.0, center - half), std::min(1.0, center + half)};
    // The formula endpoints are exactly 0 and 1 at the boundaries; keep
    // them free of rounding noise.
    if (successes == 0) out.lo = 0.0;
    if (successes == trials) out.hi = 1.0;
    return out;
}

RunMetrics evaluate(const LpbFunction& lpb, std::span<const FullRecord> test) {
    if (test.empty()) throw SizeError("evaluate: empty test set");
    RunMetrics m;
    m.n_test = test.size();
    std::vector<double> covered(test.size()), bounds(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        const double l = lpb(test[i].w);
        covered[i] = test[i].t > l ? 1.0 : 0.0;
        bounds[i] = l;
    }
    m.empirical_coverage = mean(covered);
    m.average_lpb = mean(bounds);
    m.true_coverage = std::numeric_limits<double>::quiet_NaN();
    return m;
}

namespace {

// Distinct stream ids per (n, replicate, purpose) so different study
// sizes sharing a base seed never reuse draws.
std::uint64_t stream_id(std::size_t n, std::size_t rep, unsigned purpose) {
    return (static_cast<std::uint64_t>(n) << 24) ^ (static_cast<std::uint64_t>(rep) << 2) ^
           purpose;
}

std::unique_ptr<ConditionalSurvivalModel> fit_one(FitterChoice choice, const Dataset& train,
                                                  Role role, double bandwidth) {
    if (choice == FitterChoice::auto_choice) {
        if (train.p() == 1) choice = FitterChoice::beran;
        else choice = role == Role::event ? FitterChoice::cox : FitterChoice::weibull;
    }
    switch (choice) {
        case FitterChoice::km:
            return fit_km(train, role);
        case FitterChoice::beran:
            return fit_beran(train, role,
                             bandwidth > 0.0 ? bandwidth : default_beran_bandwidth(train));
        case FitterChoice::cox:
            return fit_cox(train, role);
        case FitterChoice::weibull:
            return fit_weibull(train, role);
        default:
            throw ConfigError("unresolved fitter choice");
    }
}

}  // namespace

ReplicationStudy run_replications(const ReplicationConfig& config) {
    if (config.reps < 1) throw DomainError("run_replications: reps must be >= 1");
    const std::size_t n = config.n;
    const TauGrid grid = TauGrid::uniform(config.grid_size, config.grid_max);

    struct Slot {
        bool ok = false;
        RunMetrics metrics;
        std::string error;
    };
    std::vector<Slot> slots(config.reps);

    parallel_for(config.reps, config.jobs, [&](std::size_t rep) {
        Slot& slot = slots[rep];
        try {
            RngStream gen(config.base_seed, stream_id(n, rep, 0));
            const auto full = generate(config.setting, 3 * n, gen);

            std::vector<ObservedRecord> train_records, cal_records;
            train_records.reserve(n);
            cal_records.reserve(n);
            for (std::size_t i = 0; i < n; ++i) train_records.push_back(full[i].observed());
            for (std::size_t i = n; i < 2 * n; ++i) cal_records.push_back(full[i].observed());
            const std::span<const FullRecord> test(full.data() + 2 * n, n);

            const Dataset train(std::move(train_records));
            auto s_model = fit_one(config.s_fitter, train, Role::event, config.bandwidth);
            auto g_model = fit_one(config.g_fitter, train, Role::censoring, config.bandwidth);

            const NuisancePair nuisances{s_model.get(), g_model.get(), config.eta2};
            auto reports = sweep(nuisances, cal_records, grid, config.beta);
            const CalibrationResult sel =
                config.rule == SelectionRule::apac
                    ? select_apac(std::move(reports), config.alpha, config.beta)
                    : select_marginal(std::move(reports), config.alpha);
            const LpbFunction lpb = finalize(sel, nuisances, /*fallback_zero=*/true);

            RunMetrics m = evaluate(lpb, test);
            RngStream mc(config.base_seed, stream_id(n, rep, 1));
            m.true_coverage = true_coverage(
                config.setting, [&](std::span<const double> w) { return lpb(w); },
                config.n_mc, mc);
            m.rep = rep;
            m.selected_tau = sel.selected_tau;
            m.n_train = n;
            m.n_cal = n;
            m.seed = config.base_seed;
            slot.metrics = m;
            slot.ok = true;
        } catch (const std::exception& e) {
            slot.error = e.what();
        }
    });

    ReplicationStudy study;
    study.n = n;
    study.reps = config.reps;
    std::size_t hits = 0;
    std::vector<double> tc, ec, al;
    for (std::size_t rep = 0; rep < config.reps; ++rep) {
        if (!slots[rep].ok) {
            ++study.failures;
            study.failure_messages.push_back("rep " + std::to_string(rep) + ": " +
                                             slots[rep].error);
            continue;
        }
        const RunMetrics& m = slots[rep].metrics;
        study.metrics.push_back(m);
        if (m.true_coverage >= 1.0 - config.alpha) ++hits;
        tc.push_back(m.true_coverage);
        ec.push_back(m.empirical_coverage);
        al.push_back(m.average_lpb);
    }
    const std::size_t ok = study.metrics.size();
    if (ok > 0) {
        study.proportion = static_cast<double>(hits) / static_cast<double>(ok);
        study.wilson = wilson_interval(hits, ok, 0.95);
        study.mean_true_coverage = mean(tc);
        study.mean_empirical_coverage = mean(ec);
        study.mean_average_lpb = mean(al);
    }
    return study;
}

ProportionStudy proportion_study(ReplicationConfig config,
                                 std::span<const std::size_t> n_values) {
    if (n_values.empty()) throw DomainError("proportion_study: need at least one n");
    ProportionStudy out;
    out.setting_id = config.setting.id;
    out.n_values.assign(n_values.begin(), n_values.end());
    out.reps = config.reps;
    out.alpha = config.alpha;
    out.beta = config.beta;
    for (std::size_t n : n_values) {
        config.n = n;
        out.per_n.push_back(run_replications(config));
    }
    return out;
}

}  // namespace tcsurv
