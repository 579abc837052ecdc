#pragma once

// Test-only model fixtures and exact discrete-law enumeration helpers.

#include <functional>
#include <memory>
#include <span>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "tcsurv/models.hpp"
#include "tcsurv/onestep.hpp"
#include "tcsurv/survival_curve.hpp"

namespace fixtures {

// Covariate-free model returning one fixed step curve. An empty curve is
// the constant S == 1 (e.g. a "no censoring" G).
class FixedCurveModel final : public tcsurv::ConditionalSurvivalModel {
public:
    FixedCurveModel(tcsurv::SurvivalCurve curve, tcsurv::Role role, int p = 1)
        : ConditionalSurvivalModel(role), curve_(std::move(curve)), p_(p) {
        curve_.validate();
    }

    tcsurv::SurvivalCurve curve(std::span<const double>) const override { return curve_; }
    tcsurv::ModelKind kind() const override { return tcsurv::ModelKind::km; }
    int p() const override { return p_; }
    nlohmann::json to_json() const override { return {{"kind", "fixture"}}; }

private:
    tcsurv::SurvivalCurve curve_;
    int p_;
};

// Arbitrary conditional survival function materialized on a fixed grid.
class AnalyticModel final : public tcsurv::ConditionalSurvivalModel {
public:
    using Fn = std::function<double(double t, std::span<const double> w)>;

    AnalyticModel(Fn surv, std::vector<double> grid, tcsurv::Role role, int p = 1)
        : ConditionalSurvivalModel(role), surv_(std::move(surv)), grid_(std::move(grid)), p_(p) {}

    tcsurv::SurvivalCurve curve(std::span<const double> w) const override {
        tcsurv::SurvivalCurve c;
        c.times = grid_;
        c.probs.resize(grid_.size());
        double prev = 1.0;
        for (std::size_t j = 0; j < grid_.size(); ++j) {
            double s = surv_(grid_[j], w);
            if (s > prev) s = prev;
            if (s < 0.0) s = 0.0;
            c.probs[j] = s;
            prev = s;
        }
        return c;
    }
    tcsurv::ModelKind kind() const override { return tcsurv::ModelKind::km; }
    int p() const override { return p_; }
    nlohmann::json to_json() const override { return {{"kind", "fixture"}}; }

private:
    Fn surv_;
    std::vector<double> grid_;
    int p_;
};

// Finite-support law for (T, C) at a single covariate point; T and C
// independent. Enumeration over the support is exact (no Monte Carlo).
struct DiscreteLaw {
    std::vector<std::pair<double, double>> t_atoms;  // (time, mass)
    std::vector<std::pair<double, double>> c_atoms;  // empty -> never censored
};

// Survival step curve of a finite atom list.
inline tcsurv::SurvivalCurve atoms_to_curve(
    const std::vector<std::pair<double, double>>& atoms) {
    tcsurv::SurvivalCurve c;
    double s = 1.0;
    for (const auto& [t, m] : atoms) {
        s -= m;
        c.times.push_back(t);
        c.probs.push_back(s < 0.0 ? 0.0 : s);
    }
    return c;
}

// Exact E0[phi] under the law: sum over all (t, c) pairs of
// mass * phi(o(t,c)).
inline double enumerate_mean_phi(const tcsurv::EifContext& ctx, const DiscreteLaw& law,
                                 std::span<const double> w) {
    std::vector<std::pair<double, double>> c_atoms = law.c_atoms;
    if (c_atoms.empty()) c_atoms.emplace_back(1e12, 1.0);  // effectively uncensored
    double acc = 0.0;
    for (const auto& [t, mt] : law.t_atoms) {
        for (const auto& [c, mc] : c_atoms) {
            tcsurv::ObservedRecord o;
            o.w.assign(w.begin(), w.end());
            o.y = t < c ? t : c;
            o.delta = t <= c ? 1 : 0;
            acc += mt * mc * tcsurv::phi(ctx, o);
        }
    }
    return acc;
}

}  // namespace fixtures
