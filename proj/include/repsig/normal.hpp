#pragma once

namespace repsig {

// Two-sided tail probability of the standard normal: P(|N(0,1)| >= z).
// Computed as erfc(z / sqrt(2)), never as 1 - CDF, so deep tails keep
// full relative accuracy. Throws std::domain_error for z < 0.
double two_sided_p(double z);

// Inverse of two_sided_p: the z >= 0 with P(|N(0,1)| >= z) = p, accurate
// to 1e-9 absolute or better over (0, 1].
//
// p == 0 throws std::domain_error("degenerate threshold") -- callers must
// handle an unreachable threshold explicitly instead of receiving infinity.
// p outside [0, 1] throws std::domain_error.
double two_sided_z(double p);

}  // namespace repsig
