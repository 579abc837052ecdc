#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tcsurv/dataset.hpp"
#include "tcsurv/rng.hpp"

namespace tcsurv {

// One of the six synthetic settings: W ~ Unif([0,4]^p),
// T | W ~ LogNormal(mu(W), sigma(W)^2), C | W from the censoring law.
struct SettingSpec {
    int id = 1;
    int p = 1;
    // Exp(theta) is rate-parameterized (mean 1/theta) by default; flip to
    // read theta as the mean instead.
    bool exp_as_mean = false;
    // Test hook: force a degenerate scale so T = exp(mu(w)) exactly.
    std::optional<double> sigma_override;

    static SettingSpec preset(int id);

    double mu(std::span<const double> w) const;
    double sigma(std::span<const double> w) const;

    double draw_censoring(std::span<const double> w, RngStream& rng) const;
    // True conditional censoring survival G0(t|w) = Pr(C > t | W = w).
    double censoring_survival(double t, std::span<const double> w) const;
};

std::vector<FullRecord> generate(const SettingSpec& setting, std::size_t n, RngStream& rng);

// True conditional survival S0(t|w) = 1 - Phi((log t - mu(w)) / sigma(w)).
double true_conditional_survival(const SettingSpec& setting, double t,
                                 std::span<const double> w);

// Monte-Carlo estimate of Pr(T > lpb(W)) under the setting's law.
using LpbFn = std::function<double(std::span<const double>)>;
double true_coverage(const SettingSpec& setting, const LpbFn& lpb, std::size_t n_mc,
                     RngStream& rng);

}  // namespace tcsurv
