// Independent reference implementations used only by tests. Each one
// computes its quantity from the definition by the slowest honest route:
// bisection against std::erfc, direct summation, verbatim list-based
// gathering, full rescan of the stopping rule.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

// Inverse of erfc(z / sqrt 2) on p in (0, 1] by pure bisection; 200
// halvings of [0, 60] pin every representable double.
inline double two_sided_z(double p) {
    double lo = 0.0;
    double hi = 60.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (std::erfc(mid / 1.4142135623730951) > p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Compensated direct summation of sum_{t=s+1}^{s+n} t^(-v).
inline double pseries_window(std::int64_t s, std::int64_t n, double v) {
    double sum = 0.0;
    double carry = 0.0;
    for (std::int64_t t = s + 1; t <= s + n; ++t) {
        const double x = std::pow(static_cast<double>(t), -v) - carry;
        const double next = sum + x;
        carry = (next - sum) - x;
        sum = next;
    }
    return sum;
}

// Verbatim greedy gathering on a plain list: append delta_t, and whenever
// the list holds r_t entries, move its minimum into alpha, subtract that
// minimum from every entry, and drop the zeros. Returns min(alpha, 1).
inline double gather_alpha(const std::vector<double>& deltas,
                           const std::vector<std::int64_t>& rs) {
    std::vector<double> list;
    double alpha = 0.0;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        list.push_back(deltas[i]);
        if (static_cast<std::int64_t>(list.size()) == rs[i]) {
            const double m = *std::min_element(list.begin(), list.end());
            alpha += m;
            std::vector<double> next;
            for (double x : list) {
                const double rest = x - m;
                if (rest != 0.0) {
                    next.push_back(rest);
                }
            }
            list = std::move(next);
        }
    }
    return std::min(alpha, 1.0);
}

// Brute-force stopping rule: for each t rescan the whole prefix and count
// p_k <= delta_k. Returns the first t with count >= r_t, or 0 if none.
inline std::int64_t stop_time(const std::vector<double>& ps,
                              const std::vector<double>& deltas,
                              const std::vector<std::int64_t>& rs) {
    for (std::size_t t = 1; t <= ps.size(); ++t) {
        std::int64_t count = 0;
        for (std::size_t k = 1; k <= t; ++k) {
            if (ps[k - 1] <= deltas[k - 1]) {
                ++count;
            }
        }
        if (count >= rs[t - 1]) {
            return static_cast<std::int64_t>(t);
        }
    }
    return 0;
}

}  // namespace oracle
