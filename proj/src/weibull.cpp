#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "tcsurv/errors.hpp"
#include "tcsurv/models.hpp"

namespace tcsurv {

namespace {

int role_indicator(const ObservedRecord& r, Role role) {
    return role == Role::event ? r.delta : 1 - r.delta;
}

// Censored Weibull AFT log-likelihood in theta = (b0, beta, s) with
// s = log b, z_i = (log y_i - b0 - beta'w_i) / exp(s):
//   l = sum_i [ delta_i (z_i - s) - exp(z_i) ].
struct Obj {
    double loglik;
    Eigen::VectorXd grad;
    Eigen::MatrixXd neg_hess;
};

Obj evaluate(const Eigen::MatrixXd& x, const Eigen::VectorXd& logy,
             const std::vector<int>& ev, const Eigen::VectorXd& theta) {
    const Eigen::Index n = x.rows();
    const Eigen::Index q = x.cols();  // includes intercept column
    const double s = theta(q);
    const double sigma = std::exp(s);

    Obj o;
    o.loglik = 0.0;
    o.grad = Eigen::VectorXd::Zero(q + 1);
    o.neg_hess = Eigen::MatrixXd::Zero(q + 1, q + 1);

    for (Eigen::Index i = 0; i < n; ++i) {
        const double z = (logy(i) - x.row(i).dot(theta.head(q))) / sigma;
        const double g = std::exp(z);
        const double di = ev[static_cast<std::size_t>(i)];
        o.loglik += di * (z - s) - g;

        const double u = g - di;            // d l / d eta_i * sigma
        const double a = g * z + g - di;    // shared cross term
        for (Eigen::Index j = 0; j < q; ++j) {
            o.grad(j) += u * x(i, j) / sigma;
            for (Eigen::Index k = 0; k <= j; ++k)
                o.neg_hess(j, k) += g * x(i, j) * x(i, k) / (sigma * sigma);
            o.neg_hess(q, j) += x(i, j) / sigma * a;
        }
        o.grad(q) += u * z - di;
        o.neg_hess(q, q) += z * a;
    }
    for (Eigen::Index j = 0; j < q; ++j)
        for (Eigen::Index k = j + 1; k < q; ++k) o.neg_hess(j, k) = o.neg_hess(k, j);
    for (Eigen::Index j = 0; j < q; ++j) o.neg_hess(j, q) = o.neg_hess(q, j);
    return o;
}

}  // namespace

std::unique_ptr<ConditionalSurvivalModel> fit_weibull(const Dataset& train, Role role,
                                                      const WeibullConfig& config) {
    const int p = train.p();
    const Eigen::Index n = static_cast<Eigen::Index>(train.size());
    const Eigen::Index q = p + 1;

    Eigen::MatrixXd x(n, q);
    Eigen::VectorXd logy(n);
    std::vector<int> ev(train.size());
    int n_events = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = train[static_cast<std::size_t>(i)];
        x(i, 0) = 1.0;
        for (int c = 0; c < p; ++c) x(i, c + 1) = r.w[static_cast<std::size_t>(c)];
        ev[static_cast<std::size_t>(i)] = role_indicator(r, role);
        n_events += ev[static_cast<std::size_t>(i)];
        if (r.y <= 0.0) {
            if (ev[static_cast<std::size_t>(i)])
                throw FitError("fit_weibull: event at time 0 has no AFT likelihood");
            // Censored at 0 carries no information: S(0) = 1. Neutralize by
            // placing it at the smallest positive y with zero weight via
            // the censored contribution exp(z) ~ 0.
            logy(i) = -745.0;  // exp(-745/sigma ... ) underflows to 0
        } else {
            logy(i) = std::log(r.y);
        }
    }
    if (n_events == 0) throw FitError("fit_weibull: no events for this role");
    if (n_events < p + 2)
        throw FitError("fit_weibull: need at least p+2 events, have " + std::to_string(n_events));

    // Moment start: intercept at mean log-time, slope zero, scale from the
    // log-time spread.
    Eigen::VectorXd theta = Eigen::VectorXd::Zero(q + 1);
    {
        double m = 0.0;
        int cnt = 0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (logy(i) > -700.0) {
                m += logy(i);
                ++cnt;
            }
        m /= std::max(cnt, 1);
        double v = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            if (logy(i) > -700.0) v += (logy(i) - m) * (logy(i) - m);
        v /= std::max(cnt - 1, 1);
        theta(0) = m;
        theta(q) = std::log(std::max(std::sqrt(v), 0.05));
    }

    const NewtonConfig& nc = config.newton;
    Obj cur = evaluate(x, logy, ev, theta);
    int iter = 0;
    for (; iter < nc.max_iter; ++iter) {
        const double gmax = cur.grad.lpNorm<Eigen::Infinity>();
        if (gmax <= nc.tol) break;

        Eigen::LDLT<Eigen::MatrixXd> ldlt(cur.neg_hess);
        Eigen::VectorXd step;
        if (ldlt.info() == Eigen::Success && ldlt.isPositive())
            step = ldlt.solve(cur.grad);
        else
            step = cur.grad / std::max(1.0, gmax);
        if (!step.allFinite())
            throw FitError("fit_weibull: non-finite Newton step", iter, gmax);

        // Acceptance is tolerant to summation noise in the log-likelihood,
        // or the final quadratically-convergent steps get rejected.
        const double slack = 1e-10 * (1.0 + std::fabs(cur.loglik));
        double lambda = 1.0;
        bool improved = false;
        Eigen::VectorXd cand;
        Obj next;
        for (int half = 0; half < 40; ++half) {
            cand = theta + lambda * step;
            next = evaluate(x, logy, ev, cand);
            if (std::isfinite(next.loglik) && next.loglik >= cur.loglik - slack) {
                improved = true;
                break;
            }
            lambda *= 0.5;
        }
        if (!improved) throw FitError("fit_weibull: step-halving failed to improve", iter, gmax);
        theta = cand;
        cur = next;
    }
    const double gmax = cur.grad.lpNorm<Eigen::Infinity>();
    if (gmax > nc.tol) throw FitError("fit_weibull: Newton did not converge", iter, gmax);

    auto model = std::unique_ptr<WeibullModel>(new WeibullModel(role));
    model->intercept_ = theta(0);
    model->beta_.assign(theta.data() + 1, theta.data() + q);
    model->shape_ = std::exp(-theta(q));  // k = 1/b

    if (!config.grid.empty()) {
        model->grid_ = config.grid;
        std::sort(model->grid_.begin(), model->grid_.end());
        model->grid_.erase(std::unique(model->grid_.begin(), model->grid_.end()),
                           model->grid_.end());
        if (!model->grid_.empty() && model->grid_.front() < 0.0)
            throw DomainError("fit_weibull: grid times must be >= 0");
    } else {
        // Pooled observed follow-up grid.
        std::vector<double> g;
        g.reserve(train.size());
        for (const auto& r : train.records())
            if (r.y > 0.0) g.push_back(r.y);
        std::sort(g.begin(), g.end());
        g.erase(std::unique(g.begin(), g.end()), g.end());
        model->grid_ = std::move(g);
    }
    return model;
}

}  // namespace tcsurv
