#include "crepair/stats.hpp"

#include <cmath>

#include "crepair/error.hpp"

namespace crepair {

double normal_quantile(double q) {
    if (!(q > 0.0 && q < 1.0)) {
        throw ContractError("normal_quantile: argument must be in (0, 1)");
    }

    // Acklam coefficients.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (q < p_low) {
        const double r = std::sqrt(-2.0 * std::log(q));
        x = (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
            ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
    } else if (q <= 1.0 - p_low) {
        const double r = q - 0.5;
        const double s = r * r;
        x = (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * r /
            (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
    } else {
        const double r = std::sqrt(-2.0 * std::log(1.0 - q));
        x = -(((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
            ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
    }

    // One Halley step against the exact CDF.
    static const double sqrt2pi = std::sqrt(2.0 * std::acos(-1.0));
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - q;
    const double u = e * sqrt2pi * std::exp(0.5 * x * x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

std::int64_t required_samples(double p, double alpha) {
    if (!(p > 0.0 && p < 1.0)) throw ContractError("required_samples: p must be in (0, 1)");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ContractError("required_samples: alpha must be in (0, 1)");
    }
    const double z = normal_quantile(1.0 - alpha / 2.0);
    const double n = (1.0 / p - 1.0) * z * z;
    auto result = static_cast<std::int64_t>(std::ceil(n));
    return result < 1 ? 1 : result;
}

double wilson_upper_bound(std::int64_t n, double alpha) {
    if (n < 1) throw ContractError("wilson_upper_bound: N must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ContractError("wilson_upper_bound: alpha must be in (0, 1)");
    }
    const double z = normal_quantile(1.0 - alpha / 2.0);
    const double z2 = z * z;
    return z2 / (static_cast<double>(n) + z2);
}

} // namespace crepair
