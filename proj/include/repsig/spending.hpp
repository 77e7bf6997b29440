#pragma once

#include <cstdint>
#include <variant>
#include <vector>

namespace repsig {

// One per-decision-point budget value. `exhausted` is set when the closed
// form underflowed below the smallest representable double, so callers can
// distinguish "no budget left at this precision" from a genuine zero spend.
struct AlphaValue {
    double value = 0.0;
    bool exhausted = false;
};

// Geometric spending: alpha_t = w * (1-w)^(t-1) * alpha. Each decision point
// withdraws fraction w of the remaining budget; the series sums to alpha in
// the limit. Terms are evaluated in the log domain so t up to 1e18 degrades
// gracefully to an explicit underflow flag instead of silent garbage.
struct GeometricSpending {
    double alpha;
    double w;
    double log_term1;   // ln(w * alpha)
    double log_ratio;   // ln(1 - w)
};

// p-series spending: alpha_t = alpha / (zeta(v) * t^v), valid only for v > 1.
struct PSeriesSpending {
    double alpha;
    double v;
    double norm;  // zeta(v)
};

// p-series spending with the first s terms removed and the tail renormalized:
// alpha_t = alpha / ((zeta(v) - h(s, v)) * (t + s)^v). s = 0 reduces exactly
// to PSeriesSpending.
struct HeadlessPSeriesSpending {
    double alpha;
    double v;
    std::int64_t s;
    double norm;  // zeta(v) - h(s, v), computed as the direct tail sum
};

// Finite hand-built schedule: alpha_t = values[t-1] for t <= size, 0 after.
struct CustomSpending {
    std::vector<double> values;
    double alpha;                 // declared budget cap, sum(values) <= alpha
    std::vector<double> prefix;   // prefix[i] = sum of the first i values
};

// An alpha-spending schedule: assigns a nonnegative budget alpha_t to every
// decision point t with sum_t alpha_t <= alpha. Immutable after construction;
// all validation happens in the factories.
class Schedule {
 public:
    using Rep = std::variant<GeometricSpending, PSeriesSpending,
                             HeadlessPSeriesSpending, CustomSpending>;

    // Factories validate their parameters and throw std::domain_error on
    // violation; a p-series exponent v <= 1 reports "divergent series".
    static Schedule geometric(double alpha, double w);
    static Schedule pseries(double alpha, double v);
    static Schedule headless_pseries(double alpha, double v, std::int64_t s);
    static Schedule custom(std::vector<double> values, double alpha);

    // Budget assigned to decision point t (t >= 1).
    AlphaValue alpha_at(std::int64_t t) const;

    // sum_{t=1..t_max} alpha_t via closed forms (no term-by-term loops for
    // the infinite families).
    double partial_sum(std::int64_t t_max) const;

    // Analytic value of sum_t alpha_t: alpha for the three infinite
    // families, sum(values) for custom schedules.
    double total_alpha() const;

    const Rep& rep() const { return rep_; }

 private:
    explicit Schedule(Rep rep) : rep_(std::move(rep)) {}
    Rep rep_;
};

}  // namespace repsig
