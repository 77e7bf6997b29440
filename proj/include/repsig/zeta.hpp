#pragma once

#include <cstdint>

namespace repsig {

// Riemann zeta for real exponent v > 1, relative accuracy better than 1e-10
// across the whole domain (including v barely above 1). Throws
// std::domain_error("divergent series") for v <= 1.
double zeta(double v);

// Head of the p-series: h(s, v) = sum_{t=1..s} t^(-v). h(0, v) = 0.
// Requires v > 1 and s >= 0.
double pseries_head(std::int64_t s, double v);

// Tail of the p-series: sum_{t>s} t^(-v) = zeta(v) - pseries_head(s, v),
// computed directly so large heads do not cancel. Requires v > 1, s >= 0.
double pseries_tail(std::int64_t s, double v);

}  // namespace repsig
