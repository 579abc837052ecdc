#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>

#include "tcsurv/errors.hpp"
#include "tcsurv/models.hpp"

namespace tcsurv {

namespace {

int role_indicator(const ObservedRecord& r, Role role) {
    return role == Role::event ? r.delta : 1 - r.delta;
}

struct CoxData {
    Eigen::MatrixXd x;          // n rows sorted by descending y
    Eigen::VectorXd y;
    std::vector<int> event;
    int n_events = 0;
};

// Breslow partial log-likelihood, score and information at beta. Records
// are walked in descending time so the risk-set accumulators grow
// incrementally; ties at a time enter the risk set before its events.
struct PartialLik {
    double loglik = 0.0;
    Eigen::VectorXd score;
    Eigen::MatrixXd info;
};

PartialLik partial_lik(const CoxData& d, const Eigen::VectorXd& beta, bool with_derivs) {
    const Eigen::Index n = d.x.rows();
    const Eigen::Index p = d.x.cols();
    PartialLik out;
    out.score = Eigen::VectorXd::Zero(p);
    out.info = Eigen::MatrixXd::Zero(p, p);

    Eigen::VectorXd eta = d.x * beta;
    double s0 = 0.0;
    Eigen::VectorXd s1 = Eigen::VectorXd::Zero(p);
    Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(p, p);

    Eigen::Index i = 0;
    while (i < n) {
        const double t = d.y(i);
        // Everyone with y == t joins the risk set first.
        Eigen::Index j = i;
        while (j < n && d.y(j) == t) {
            const double r = std::exp(eta(j));
            s0 += r;
            if (with_derivs) {
                s1.noalias() += r * d.x.row(j).transpose();
                s2.noalias() += r * d.x.row(j).transpose() * d.x.row(j);
            }
            ++j;
        }
        int dd = 0;
        for (Eigen::Index k = i; k < j; ++k) {
            if (d.event[static_cast<std::size_t>(k)]) {
                ++dd;
                out.loglik += eta(k);
                if (with_derivs) out.score += d.x.row(k).transpose();
            }
        }
        if (dd > 0) {
            out.loglik -= dd * std::log(s0);
            if (with_derivs) {
                const Eigen::VectorXd xbar = s1 / s0;
                out.score.noalias() -= dd * xbar;
                out.info.noalias() += dd * (s2 / s0 - xbar * xbar.transpose());
            }
        }
        i = j;
    }
    return out;
}

}  // namespace

std::unique_ptr<ConditionalSurvivalModel> fit_cox(const Dataset& train, Role role,
                                                  const NewtonConfig& config) {
    const int p = train.p();

    CoxData d;
    {
        std::vector<std::size_t> order(train.size());
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return train[a].y > train[b].y;  // descending
        });
        d.x.resize(static_cast<Eigen::Index>(train.size()), p);
        d.y.resize(static_cast<Eigen::Index>(train.size()));
        d.event.resize(train.size());
        for (std::size_t k = 0; k < order.size(); ++k) {
            const auto& r = train[order[k]];
            for (int c = 0; c < p; ++c) d.x(static_cast<Eigen::Index>(k), c) = r.w[static_cast<std::size_t>(c)];
            d.y(static_cast<Eigen::Index>(k)) = r.y;
            d.event[k] = role_indicator(r, role);
            d.n_events += d.event[k];
        }
    }
    if (d.n_events == 0) throw FitError("fit_cox: no events for this role");
    if (d.n_events < p + 2)
        throw FitError("fit_cox: need at least p+2 events, have " + std::to_string(d.n_events));

    Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
    PartialLik cur = partial_lik(d, beta, true);
    int iter = 0;
    for (; iter < config.max_iter; ++iter) {
        const double gmax = cur.score.lpNorm<Eigen::Infinity>();
        if (gmax <= config.tol) break;

        Eigen::LDLT<Eigen::MatrixXd> ldlt(cur.info);
        Eigen::VectorXd step;
        if (ldlt.info() == Eigen::Success && ldlt.isPositive())
            step = ldlt.solve(cur.score);
        else
            step = cur.score / std::max(1.0, gmax);  // steepest-ascent fallback
        if (!step.allFinite())
            throw FitError("fit_cox: non-finite Newton step", iter, gmax);

        // Tolerate summation noise in the partial likelihood so the final
        // quadratically-convergent steps are not rejected.
        const double slack = 1e-10 * (1.0 + std::fabs(cur.loglik));
        double lambda = 1.0;
        Eigen::VectorXd cand;
        PartialLik next;
        bool improved = false;
        for (int half = 0; half < 30; ++half) {
            cand = beta + lambda * step;
            next = partial_lik(d, cand, true);
            if (std::isfinite(next.loglik) && next.loglik >= cur.loglik - slack) {
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) throw FitError("fit_cox: step-halving failed to improve", iter, gmax);
        beta = cand;
        cur = next;
        if (beta.lpNorm<Eigen::Infinity>() > 200.0)
            throw FitError("fit_cox: coefficients diverging (separation?)", iter, gmax);
    }
    const double gmax = cur.score.lpNorm<Eigen::Infinity>();
    if (gmax > config.tol)
        throw FitError("fit_cox: Newton did not converge", iter, gmax);

    auto model = std::unique_ptr<CoxModel>(new CoxModel(role));
    model->beta_.assign(beta.data(), beta.data() + p);

    // Breslow baseline: dH0(t_j) = d_j / sum_{risk} exp(beta'w), ascending.
    {
        Eigen::VectorXd eta = d.x * beta;
        double s0 = 0.0;
        std::vector<double> times_desc, dH_desc;
        Eigen::Index i = 0;
        const Eigen::Index n = d.x.rows();
        while (i < n) {
            const double t = d.y(i);
            Eigen::Index j = i;
            int dd = 0;
            while (j < n && d.y(j) == t) {
                s0 += std::exp(eta(j));
                if (d.event[static_cast<std::size_t>(j)]) ++dd;
                ++j;
            }
            if (dd > 0) {
                times_desc.push_back(t);
                dH_desc.push_back(std::min(1.0, static_cast<double>(dd) / s0));
            }
            i = j;
        }
        model->times_.assign(times_desc.rbegin(), times_desc.rend());
        model->dH0_.assign(dH_desc.rbegin(), dH_desc.rend());
        model->log_s0_.resize(model->dH0_.size());
        double acc = 0.0;
        for (std::size_t k = 0; k < model->dH0_.size(); ++k) {
            acc += std::log1p(-std::min(model->dH0_[k], 1.0));
            model->log_s0_[k] = acc;
        }
    }
    return model;
}

SurvivalCurve CoxModel::curve(std::span<const double> w) const {
    double eta = 0.0;
    for (std::size_t c = 0; c < beta_.size(); ++c) eta += beta_[c] * w[c];
    const double risk = std::exp(eta);
    SurvivalCurve out;
    out.times = times_;
    out.probs.resize(log_s0_.size());
    double prev = 1.0;
    for (std::size_t j = 0; j < log_s0_.size(); ++j) {
        // Product-limit baseline powered by the relative risk.
        double s = std::exp(risk * log_s0_[j]);
        s = std::min(s, prev);
        out.probs[j] = s;
        prev = s;
    }
    return out;
}

double WeibullModel::scale(std::span<const double> w) const {
    double eta = intercept_;
    for (std::size_t c = 0; c < beta_.size(); ++c) eta += beta_[c] * w[c];
    return std::exp(eta);
}

double WeibullModel::survival(std::span<const double> w, double t) const {
    if (t <= 0.0) return 1.0;
    return std::exp(-std::pow(t / scale(w), shape_));
}

SurvivalCurve WeibullModel::curve(std::span<const double> w) const {
    SurvivalCurve out;
    out.times = grid_;
    out.probs.resize(grid_.size());
    double prev = 1.0;
    for (std::size_t j = 0; j < grid_.size(); ++j) {
        double s = survival(w, grid_[j]);
        s = std::min(s, prev);
        out.probs[j] = s;
        prev = s;
    }
    return out;
}

}  // namespace tcsurv
