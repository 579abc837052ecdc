#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tcsurv {

// Which nuisance a model estimates. The censoring role fits on the
// reversed indicator (1 - delta), treating censoring as the "event".
enum class Role { event, censoring };

// One right-censored observation: covariates w, follow-up y = min(T, C),
// indicator delta = 1{T <= C}. Immutable once the dataset is built.
struct ObservedRecord {
    std::vector<double> w;
    double y = 0.0;
    int delta = 0;
};

// A complete latent draw (T, C both known). Produced by the simulator and
// consumed by the evaluation oracle only.
struct FullRecord {
    std::vector<double> w;
    double t = 0.0;
    double c = 0.0;

    double y() const { return t < c ? t : c; }
    int delta() const { return t <= c ? 1 : 0; }
    ObservedRecord observed() const { return ObservedRecord{w, y(), delta()}; }
};

class Dataset {
public:
    Dataset() = default;
    // Validates: nonempty, consistent covariate dimension, finite w,
    // y >= 0, delta in {0,1}. Throws SizeError / DomainError.
    explicit Dataset(std::vector<ObservedRecord> records);

    const std::vector<ObservedRecord>& records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    int p() const { return p_; }

    const ObservedRecord& operator[](std::size_t i) const { return records_[i]; }

    Dataset subset(std::span<const std::size_t> indices) const;

private:
    std::vector<ObservedRecord> records_;
    int p_ = 0;
};

// Train/calibration partition of 0..N-1. |cal| = round-half-up(c_prop * N).
struct SplitIndices {
    std::vector<std::size_t> train;
    std::vector<std::size_t> cal;
    double c_prop = 0.0;
};

// Uniformly random partition, deterministic in (dataset size, c_prop, seed).
SplitIndices split(const Dataset& dataset, double c_prop, std::uint64_t seed);

}  // namespace tcsurv
