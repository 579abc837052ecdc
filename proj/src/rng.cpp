#include "tcsurv/rng.hpp"

#include <cmath>

#include "tcsurv/errors.hpp"
#include "tcsurv/stats.hpp"

namespace tcsurv {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
    // Scramble (seed, stream) into one engine seed; consecutive stream ids
    // land far apart in the splitmix sequence.
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= stream * 0xD1342543DE82EF95ULL + 0x2545F4914F6CDD1DULL;
    std::uint64_t b = splitmix64(s);
    engine_.seed(a ^ (b + 0x9E3779B97F4A7C15ULL));
}

double RngStream::normal() { return norm_quantile(uniform_open()); }

double RngStream::exponential(double rate) {
    if (!(rate > 0.0)) throw DomainError("exponential: rate must be positive");
    return -std::log(uniform_open()) / rate;
}

double RngStream::lognormal(double mu, double sigma) {
    return std::exp(mu + sigma * normal());
}

}  // namespace tcsurv
