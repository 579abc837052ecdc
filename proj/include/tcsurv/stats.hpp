#pragma once

#include <cstddef>
#include <span>

namespace tcsurv {

// Standard normal CDF.
double norm_cdf(double x);

// Standard normal quantile, Wichura's AS 241 rational approximation
// (relative accuracy ~1e-15, well inside the 1e-9 requirement and
// bit-stable across platforms).
double norm_quantile(double p);

// z_beta: the (1-beta)-quantile of the standard normal.
inline double z_upper(double beta) { return norm_quantile(1.0 - beta); }

// Pairwise (cascade) summation: deterministic for a fixed element order
// and accurate to O(log n) ulps.
double pairwise_sum(std::span<const double> x);

double mean(std::span<const double> x);

}  // namespace tcsurv
