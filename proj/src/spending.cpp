#include "repsig/spending.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "repsig/zeta.hpp"

namespace repsig {
namespace {

void require_budget(double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) {
        throw std::domain_error("total budget alpha must lie in (0, 1]");
    }
}

void require_t(std::int64_t t) {
    if (t < 1) {
        throw std::domain_error("decision point index t must be >= 1");
    }
}

}  // namespace

Schedule Schedule::geometric(double alpha, double w) {
    require_budget(alpha);
    if (!(w > 0.0 && w < 1.0)) {
        throw std::domain_error("withdrawal rate w must lie in (0, 1)");
    }
    GeometricSpending g;
    g.alpha = alpha;
    g.w = w;
    g.log_term1 = std::log(w) + std::log(alpha);
    g.log_ratio = std::log1p(-w);
    return Schedule(Rep{g});
}

Schedule Schedule::pseries(double alpha, double v) {
    require_budget(alpha);
    PSeriesSpending p;
    p.alpha = alpha;
    p.v = v;
    p.norm = zeta(v);  // rejects v <= 1 with "divergent series"
    return Schedule(Rep{p});
}

Schedule Schedule::headless_pseries(double alpha, double v, std::int64_t s) {
    require_budget(alpha);
    if (s < 0) {
        throw std::domain_error("removed head length s must be >= 0");
    }
    HeadlessPSeriesSpending h;
    h.alpha = alpha;
    h.v = v;
    h.s = s;
    h.norm = pseries_tail(s, v);  // = zeta(v) - h(s, v); rejects v <= 1
    return Schedule(Rep{h});
}

Schedule Schedule::custom(std::vector<double> values, double alpha) {
    require_budget(alpha);
    CustomSpending c;
    c.prefix.reserve(values.size() + 1);
    c.prefix.push_back(0.0);
    for (double x : values) {
        if (!(x >= 0.0) || !std::isfinite(x)) {
            throw std::domain_error("custom schedule values must be finite and nonnegative");
        }
        c.prefix.push_back(c.prefix.back() + x);
    }
    if (c.prefix.back() > alpha + 1e-12) {
        throw std::domain_error("custom schedule values sum to more than alpha");
    }
    c.values = std::move(values);
    c.alpha = alpha;
    return Schedule(Rep{c});
}

AlphaValue Schedule::alpha_at(std::int64_t t) const {
    require_t(t);
    return std::visit(
        [t](const auto& s) -> AlphaValue {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GeometricSpending>) {
                const double log_at =
                    s.log_term1 + static_cast<double>(t - 1) * s.log_ratio;
                const double value = std::exp(log_at);
                return {value, value == 0.0};
            } else if constexpr (std::is_same_v<T, PSeriesSpending>) {
                const double value =
                    s.alpha / (s.norm * std::pow(static_cast<double>(t), s.v));
                return {value, value == 0.0};
            } else if constexpr (std::is_same_v<T, HeadlessPSeriesSpending>) {
                // t + s in double: the sum can exceed int64 range during
                // exhaustion probes near 2^63.
                const double shifted =
                    static_cast<double>(t) + static_cast<double>(s.s);
                const double value =
                    s.alpha / (s.norm * std::pow(shifted, s.v));
                return {value, value == 0.0};
            } else {
                if (t > static_cast<std::int64_t>(s.values.size())) {
                    return {0.0, true};
                }
                return {s.values[static_cast<std::size_t>(t - 1)], false};
            }
        },
        rep_);
}

double Schedule::partial_sum(std::int64_t t_max) const {
    require_t(t_max);
    return std::visit(
        [t_max](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GeometricSpending>) {
                // alpha * (1 - (1-w)^T), with expm1 keeping small T exact.
                return s.alpha *
                       -std::expm1(static_cast<double>(t_max) * s.log_ratio);
            } else if constexpr (std::is_same_v<T, PSeriesSpending>) {
                return s.alpha * pseries_head(t_max, s.v) / s.norm;
            } else if constexpr (std::is_same_v<T, HeadlessPSeriesSpending>) {
                // sum_{t=1..T} = alpha * (tail(s) - tail(s+T)) / tail(s)
                return s.alpha * (s.norm - pseries_tail(s.s + t_max, s.v)) /
                       s.norm;
            } else {
                const auto n = static_cast<std::int64_t>(s.values.size());
                return s.prefix[static_cast<std::size_t>(std::min(t_max, n))];
            }
        },
        rep_);
}

double Schedule::total_alpha() const {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, CustomSpending>) {
                return s.prefix.back();
            } else {
                return s.alpha;
            }
        },
        rep_);
}

}  // namespace repsig
