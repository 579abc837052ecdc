#include <algorithm>
#include <cmath>
#include <numeric>

#include "tcsurv/errors.hpp"
#include "tcsurv/models.hpp"

namespace tcsurv {

double default_beran_bandwidth(const Dataset& train) {
    if (train.p() != 1) throw DomainError("beran bandwidth: univariate covariate required");
    const std::size_t n = train.size();
    double m = 0.0;
    for (const auto& r : train.records()) m += r.w[0];
    m /= static_cast<double>(n);
    double v = 0.0;
    for (const auto& r : train.records()) v += (r.w[0] - m) * (r.w[0] - m);
    v /= static_cast<double>(n > 1 ? n - 1 : 1);
    const double sd = std::sqrt(v);
    // 0.5 * sd(w) * n^(-1/5); floor keeps a degenerate column usable.
    return std::max(0.5 * sd * std::pow(static_cast<double>(n), -0.2), 1e-8);
}

std::unique_ptr<ConditionalSurvivalModel> fit_beran(const Dataset& train, Role role,
                                                    double bandwidth) {
    if (train.p() != 1) throw DomainError("fit_beran: exactly one covariate required");
    if (!(bandwidth > 0.0)) throw DomainError("fit_beran: bandwidth must be positive");

    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return train[a].y < train[b].y;
    });

    auto model = std::unique_ptr<BeranModel>(new BeranModel(role));
    model->bandwidth_ = bandwidth;
    model->w_.reserve(train.size());
    model->y_.reserve(train.size());
    model->event_.reserve(train.size());
    for (std::size_t i : order) {
        const auto& r = train[i];
        model->w_.push_back(r.w[0]);
        model->y_.push_back(r.y);
        model->event_.push_back(role == Role::event ? r.delta : 1 - r.delta);
    }
    return model;
}

double BeranModel::effective_weight(double w) const {
    double s = 0.0;
    for (double wi : w_) {
        const double z = (w - wi) / bandwidth_;
        s += std::exp(-0.5 * z * z);
    }
    return s;
}

SurvivalCurve BeranModel::curve(std::span<const double> w) const {
    const std::size_t n = w_.size();
    const double wq = w[0];

    std::vector<double> weight(n);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = (wq - w_[i]) / bandwidth_;
        weight[i] = std::exp(-0.5 * z * z);
        total += weight[i];
    }
    if (total < 5.0) extrapolations_.fetch_add(1, std::memory_order_relaxed);

    // Kernel-weighted product-limit: at each distinct event time the jump
    // is (event weight there) / (weight still at risk). Records are
    // presorted by y, so the at-risk mass is a running suffix sum.
    SurvivalCurve out;
    double at_risk = total;
    double s = 1.0;
    std::size_t i = 0;
    while (i < n) {
        const double t = y_[i];
        double d = 0.0, m = 0.0;
        bool any_event = false;
        while (i < n && y_[i] == t) {
            if (event_[i]) {
                d += weight[i];
                any_event = true;
            }
            m += weight[i];
            ++i;
        }
        if (any_event) {
            const double h = at_risk > 0.0 ? std::min(1.0, std::max(0.0, d / at_risk)) : 1.0;
            s *= 1.0 - h;
            out.times.push_back(t);
            out.probs.push_back(s);
        }
        at_risk -= m;
    }
    return out;
}

}  // namespace tcsurv
