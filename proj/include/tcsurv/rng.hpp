#pragma once

#include <cstdint>
#include <random>

namespace tcsurv {

// Seeded random stream. The same (seed, stream) pair yields an identical
// draw sequence; replication harnesses assign one stream id per task so
// workers never share state. Variates are produced by inverse-CDF
// transforms of mt19937_64 output, so sequences are identical across
// platforms and standard libraries.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0,1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform on the open interval (0,1); safe to feed to log/quantile.
    double uniform_open() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double normal();  // standard normal via inverse CDF

    double exponential(double rate);  // mean 1/rate

    double lognormal(double mu, double sigma);

private:
    std::mt19937_64 engine_;
};

}  // namespace tcsurv
