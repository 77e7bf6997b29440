#include "repsig/normal.hpp"

#include <cmath>
#include <stdexcept>

namespace repsig {
namespace {

// Acklam's rational approximation to the standard normal quantile,
// lower-tail argument q in (0, 0.5]. Relative error ~1.15e-9 on its own;
// Newton refinement below takes the result to machine precision.
double norm_quantile_estimate(double q) {
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

    const double p_low = 0.02425;
    if (q < p_low) {
        const double r = std::sqrt(-2.0 * std::log(q));
        return (((((c[0] * r + c[1]) * r + c[2]) * r + c[3]) * r + c[4]) * r + c[5]) /
               ((((d[0] * r + d[1]) * r + d[2]) * r + d[3]) * r + 1.0);
    }
    const double r = q - 0.5;
    const double s = r * r;
    return (((((a[0] * s + a[1]) * s + a[2]) * s + a[3]) * s + a[4]) * s + a[5]) * r /
           (((((b[0] * s + b[1]) * s + b[2]) * s + b[3]) * s + b[4]) * s + 1.0);
}

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kSqrt2OverPi = 0.7978845608028654;  // sqrt(2/pi)

}  // namespace

double two_sided_p(double z) {
    if (!(z >= 0.0)) {
        throw std::domain_error("two_sided_p: z must be nonnegative");
    }
    return std::erfc(z / kSqrt2);
}

double two_sided_z(double p) {
    if (p == 0.0) {
        throw std::domain_error("degenerate threshold");
    }
    if (!(p > 0.0 && p <= 1.0)) {
        throw std::domain_error("two_sided_z: p must lie in (0, 1]");
    }
    if (p == 1.0) {
        return 0.0;
    }

    // Two-sided mass p puts p/2 in the lower tail.
    double z = -norm_quantile_estimate(0.5 * p);

    // Newton iterations against the exact tail probability erfc(z/sqrt(2)).
    // The derivative is -sqrt(2/pi) * exp(-z^2/2); two steps from the Acklam
    // start converge to machine precision everywhere p >= DBL_MIN.
    for (int i = 0; i < 2; ++i) {
        const double density = kSqrt2OverPi * std::exp(-0.5 * z * z);
        if (density <= 0.0) {
            break;
        }
        z += (std::erfc(z / kSqrt2) - p) / density;
    }
    return z < 0.0 ? 0.0 : z;
}

}  // namespace repsig
