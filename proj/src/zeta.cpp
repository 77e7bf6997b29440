#include "repsig/zeta.hpp"

#include <cmath>
#include <stdexcept>

namespace repsig {
namespace {

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

void require_convergent(double v) {
    if (!(v > 1.0)) {
        throw std::domain_error("divergent series");
    }
    if (!std::isfinite(v)) {
        throw std::domain_error("pseries exponent must be finite");
    }
}

// Euler-Maclaurin estimate of sum_{t=n..inf} t^(-v): the integral plus the
// first boundary and Bernoulli corrections. The omitted term is
// O(v^5 n^(-v-5)), negligible for the n values used below.
double euler_maclaurin_from(double n, double v) {
    const double nv = std::pow(n, -v);
    return n * nv / (v - 1.0) + 0.5 * nv + (v / 12.0) * nv / n -
           (v * (v + 1.0) * (v + 2.0) / 720.0) * nv / (n * n * n);
}

constexpr std::int64_t kDirectTerms = 100000;

}  // namespace

double pseries_tail(std::int64_t s, double v) {
    require_convergent(v);
    if (s < 0) {
        throw std::domain_error("pseries head length must be nonnegative");
    }
    // Sum a block of terms directly, then close with Euler-Maclaurin at the
    // block boundary. Terms that can no longer affect the sum are skipped.
    KahanSum head;
    std::int64_t t = s + 1;
    const std::int64_t t_end = s + kDirectTerms;
    for (; t < t_end; ++t) {
        const double term = std::pow(static_cast<double>(t), -v);
        if (term < head.sum * 1e-18) {
            break;
        }
        head.add(term);
    }
    head.add(euler_maclaurin_from(static_cast<double>(t), v));
    return head.sum;
}

double zeta(double v) {
    return pseries_tail(0, v);
}

double pseries_head(std::int64_t s, double v) {
    require_convergent(v);
    if (s < 0) {
        throw std::domain_error("pseries head length must be nonnegative");
    }
    if (s >= 2 * kDirectTerms) {
        return zeta(v) - pseries_tail(s, v);
    }
    KahanSum head;
    for (std::int64_t t = 1; t <= s; ++t) {
        head.add(std::pow(static_cast<double>(t), -v));
    }
    return head.sum;
}

}  // namespace repsig
