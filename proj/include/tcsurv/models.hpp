#pragma once

#include <atomic>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tcsurv/dataset.hpp"
#include "tcsurv/survival_curve.hpp"

namespace tcsurv {

enum class ModelKind { km, beran, cox, weibull };

std::string to_string(ModelKind kind);
std::string to_string(Role role);

// A fitted conditional survival model for either nuisance role. Fitted
// models are immutable and safe to share across threads; curve() is pure.
class ConditionalSurvivalModel {
public:
    virtual ~ConditionalSurvivalModel() = default;

    virtual SurvivalCurve curve(std::span<const double> w) const = 0;
    virtual ModelKind kind() const = 0;
    virtual int p() const = 0;
    Role role() const { return role_; }

    virtual nlohmann::json to_json() const = 0;
    static std::unique_ptr<ConditionalSurvivalModel> from_json(const nlohmann::json& j);

protected:
    explicit ConditionalSurvivalModel(Role role) : role_(role) {}
    Role role_;
};

struct NewtonConfig {
    double tol = 1e-8;  // convergence: max |score| <= tol
    int max_iter = 100;
};

// Cox proportional hazards, Breslow tie handling, Newton on the partial
// likelihood. Baseline cumulative-hazard increments by the Breslow
// estimator; the conditional curve is the product-limit baseline raised
// to exp(beta'w), so it coincides with Kaplan-Meier when beta = 0.
std::unique_ptr<ConditionalSurvivalModel> fit_cox(const Dataset& train, Role role,
                                                  const NewtonConfig& config = {});

struct WeibullConfig {
    NewtonConfig newton;
    std::vector<double> grid;  // step-curve grid; empty -> pooled y values
};

// Weibull AFT: log T = b0 + beta'w + b*eps with standard minimum-Gumbel
// eps; maximum likelihood with right censoring, Newton with step-halving
// on (b0, beta, log b).
std::unique_ptr<ConditionalSurvivalModel> fit_weibull(const Dataset& train, Role role,
                                                      const WeibullConfig& config = {});

std::unique_ptr<ConditionalSurvivalModel> fit_km(const Dataset& train, Role role);

// Kernel-weighted product-limit (Beran) for a single covariate; Gaussian
// kernel of bandwidth h. Reduces to Kaplan-Meier as h -> infinity.
std::unique_ptr<ConditionalSurvivalModel> fit_beran(const Dataset& train, Role role,
                                                    double bandwidth);

double default_beran_bandwidth(const Dataset& train);

// Accessors for kind-specific internals used by diagnostics and tests.
class CoxModel;
class WeibullModel;
class BeranModel;

class CoxModel final : public ConditionalSurvivalModel {
public:
    SurvivalCurve curve(std::span<const double> w) const override;
    ModelKind kind() const override { return ModelKind::cox; }
    int p() const override { return static_cast<int>(beta_.size()); }
    nlohmann::json to_json() const override;

    const std::vector<double>& beta() const { return beta_; }
    const std::vector<double>& baseline_times() const { return times_; }
    // Breslow increments dH0(t_j), clamped to [0,1].
    const std::vector<double>& baseline_hazard() const { return dH0_; }

private:
    friend std::unique_ptr<ConditionalSurvivalModel> fit_cox(const Dataset&, Role,
                                                             const NewtonConfig&);
    friend class ConditionalSurvivalModel;
    explicit CoxModel(Role role) : ConditionalSurvivalModel(role) {}
    std::vector<double> beta_;
    std::vector<double> times_;
    std::vector<double> dH0_;
    std::vector<double> log_s0_;  // cumulative log(1 - dH0)
};

class WeibullModel final : public ConditionalSurvivalModel {
public:
    SurvivalCurve curve(std::span<const double> w) const override;
    ModelKind kind() const override { return ModelKind::weibull; }
    int p() const override { return static_cast<int>(beta_.size()); }
    nlohmann::json to_json() const override;

    double intercept() const { return intercept_; }
    const std::vector<double>& beta() const { return beta_; }
    double shape() const { return shape_; }                     // k = 1/b
    double scale(std::span<const double> w) const;              // lambda(w)
    double survival(std::span<const double> w, double t) const; // exact, not gridded

private:
    friend std::unique_ptr<ConditionalSurvivalModel> fit_weibull(const Dataset&, Role,
                                                                 const WeibullConfig&);
    friend class ConditionalSurvivalModel;
    explicit WeibullModel(Role role) : ConditionalSurvivalModel(role) {}
    double intercept_ = 0.0;
    std::vector<double> beta_;
    double shape_ = 1.0;
    std::vector<double> grid_;
};

class KmModel final : public ConditionalSurvivalModel {
public:
    SurvivalCurve curve(std::span<const double> w) const override;
    ModelKind kind() const override { return ModelKind::km; }
    int p() const override { return p_; }
    nlohmann::json to_json() const override;

private:
    friend std::unique_ptr<ConditionalSurvivalModel> fit_km(const Dataset&, Role);
    friend class ConditionalSurvivalModel;
    explicit KmModel(Role role) : ConditionalSurvivalModel(role) {}
    int p_ = 0;
    SurvivalCurve curve_;
};

class BeranModel final : public ConditionalSurvivalModel {
public:
    SurvivalCurve curve(std::span<const double> w) const override;
    ModelKind kind() const override { return ModelKind::beran; }
    int p() const override { return 1; }
    nlohmann::json to_json() const override;

    double bandwidth() const { return bandwidth_; }
    // Sum of kernel weights at the query point; below ~5 the curve is an
    // extrapolation.
    double effective_weight(double w) const;
    // Number of curve() queries that fell below the support threshold.
    long extrapolation_count() const { return extrapolations_.load(); }

private:
    friend std::unique_ptr<ConditionalSurvivalModel> fit_beran(const Dataset&, Role, double);
    friend class ConditionalSurvivalModel;
    explicit BeranModel(Role role) : ConditionalSurvivalModel(role) {}
    double bandwidth_ = 1.0;
    // Training columns sorted by follow-up time; event carries the
    // role-adjusted indicator.
    std::vector<double> w_;
    std::vector<double> y_;
    std::vector<int> event_;
    mutable std::atomic<long> extrapolations_{0};
};

}  // namespace tcsurv
