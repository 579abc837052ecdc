#include "tcsurv/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "tcsurv/errors.hpp"
#include "tcsurv/rng.hpp"

namespace tcsurv {

Dataset::Dataset(std::vector<ObservedRecord> records) : records_(std::move(records)) {
    if (records_.empty()) throw SizeError("dataset must be nonempty");
    p_ = static_cast<int>(records_[0].w.size());
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        if (static_cast<int>(r.w.size()) != p_)
            throw DomainError("record " + std::to_string(i) + ": covariate dimension mismatch");
        for (double v : r.w)
            if (!std::isfinite(v))
                throw DomainError("record " + std::to_string(i) + ": non-finite covariate");
        if (!std::isfinite(r.y) || r.y < 0.0)
            throw DomainError("record " + std::to_string(i) + ": follow-up must be finite and >= 0");
        if (r.delta != 0 && r.delta != 1)
            throw DomainError("record " + std::to_string(i) + ": delta must be 0 or 1");
    }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
    std::vector<ObservedRecord> out;
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        if (i >= records_.size()) throw DomainError("subset index out of range");
        out.push_back(records_[i]);
    }
    return Dataset(std::move(out));
}

SplitIndices split(const Dataset& dataset, double c_prop, std::uint64_t seed) {
    if (!(c_prop > 0.0 && c_prop < 1.0)) throw DomainError("split: c_prop must be in (0,1)");
    const std::size_t n_total = dataset.size();
    if (n_total < 2) throw SizeError("split: need at least 2 records");

    const std::size_t n_cal =
        static_cast<std::size_t>(std::floor(c_prop * static_cast<double>(n_total) + 0.5));
    if (n_cal == 0 || n_cal == n_total)
        throw SizeError("split: both parts must get at least one record");

    std::vector<std::size_t> perm(n_total);
    for (std::size_t i = 0; i < n_total; ++i) perm[i] = i;
    RngStream rng(seed, 0);
    // Fisher-Yates with rejection-free modulo is fine here: biases of order
    // 2^-53 are irrelevant for partitioning.
    for (std::size_t i = n_total - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(i + 1));
        std::swap(perm[i], perm[j <= i ? j : i]);
    }

    SplitIndices out;
    out.c_prop = c_prop;
    out.cal.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_cal));
    out.train.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_cal), perm.end());
    std::sort(out.cal.begin(), out.cal.end());
    std::sort(out.train.begin(), out.train.end());
    return out;
}

}  // namespace tcsurv
