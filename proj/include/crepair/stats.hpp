#pragma once

#include <cstdint>

namespace crepair {

/// Inverse standard-normal CDF via Acklam's rational approximation with one
/// Halley refinement step; absolute error well below 1.5e-7 on (0, 1).
double normal_quantile(double q);

/// Samples needed before a miss streak supports the failure statement:
/// N = ceil((1/p - 1) * Q(1 - alpha/2)^2).
std::int64_t required_samples(double p, double alpha);

/// Wilson score upper bound on the success probability after N trials with
/// zero successes: z^2 / (N + z^2), z = Q(1 - alpha/2).
double wilson_upper_bound(std::int64_t n, double alpha);

} // namespace crepair
