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

}  // namespace

std::unique_ptr<ConditionalSurvivalModel> fit_km(const Dataset& train, Role role) {
    std::vector<std::size_t> order(train.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return train[a].y < train[b].y;
    });

    auto model = std::unique_ptr<KmModel>(new KmModel(role));
    model->p_ = train.p();

    // Product-limit over distinct event times; ties aggregate into one
    // jump, censorings at a tied time stay in the risk set for it.
    const std::size_t n = train.size();
    double s = 1.0;
    std::size_t i = 0;
    std::size_t at_risk = n;
    while (i < n) {
        const double t = train[order[i]].y;
        std::size_t d = 0, m = 0;
        while (i < n && train[order[i]].y == t) {
            if (role_indicator(train[order[i]], role)) ++d;
            ++m;
            ++i;
        }
        if (d > 0) {
            s *= 1.0 - static_cast<double>(d) / static_cast<double>(at_risk);
            model->curve_.times.push_back(t);
            model->curve_.probs.push_back(s);
        }
        at_risk -= m;
    }
    return model;
}

SurvivalCurve KmModel::curve(std::span<const double>) const { return curve_; }

}  // namespace tcsurv
