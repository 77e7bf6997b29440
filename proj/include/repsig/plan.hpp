#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "repsig/spending.hpp"

namespace repsig {

// r_t = ceil(u * t): a fixed fraction of decision points must be significant.
struct FractionPolicy {
    double u;
};

// r_t = r for every t.
struct ConstantPolicy {
    std::int64_t r;
};

// Explicit nondecreasing prefix; queries beyond the sequence return the
// final value.
struct CustomPolicy {
    std::vector<std::int64_t> values;
};

// Required-repetition counts r_t, nondecreasing in t.
class RepetitionPolicy {
 public:
    using Rep = std::variant<FractionPolicy, ConstantPolicy, CustomPolicy>;

    static RepetitionPolicy fraction(double u);
    static RepetitionPolicy constant(std::int64_t r);
    static RepetitionPolicy custom(std::vector<std::int64_t> values);

    std::int64_t r_at(std::int64_t t) const;
    const Rep& rep() const { return rep_; }

 private:
    explicit RepetitionPolicy(Rep rep) : rep_(std::move(rep)) {}
    Rep rep_;
};

// Per-decision-point p-value requirement delta_t = alpha_t * r_t, clamped
// to 1 when the product exceeds it (a threshold of 1 is vacuous but valid).
struct Threshold {
    double delta = 0.0;
    bool clamped = false;
    bool exhausted = false;
};

// Thrown by z_threshold_at when delta_t underflowed to zero: there is no
// finite Z equivalent, and curve emitters use the carried t to truncate.
class BudgetExhaustedError : public std::runtime_error {
 public:
    explicit BudgetExhaustedError(std::int64_t t)
        : std::runtime_error("budget exhausted at decision point " +
                             std::to_string(t)),
          t_(t) {}
    std::int64_t t() const { return t_; }

 private:
    std::int64_t t_;
};

// A complete sequential test plan: spending schedule plus repetition policy.
// Stopping rule: stop and declare significance at the first t where at least
// r_t of the p-values p_1..p_t satisfy p_k <= delta_k.
class TestPlan {
 public:
    TestPlan(Schedule schedule, RepetitionPolicy policy)
        : schedule_(std::move(schedule)), policy_(std::move(policy)) {}

    const Schedule& schedule() const { return schedule_; }
    const RepetitionPolicy& policy() const { return policy_; }

    // Total type-1 error budget the plan is entitled to spend.
    double alpha() const { return schedule_.total_alpha(); }

    std::int64_t r_at(std::int64_t t) const { return policy_.r_at(t); }
    Threshold threshold_at(std::int64_t t) const;

    // Z-score equivalent of threshold_at; throws BudgetExhaustedError when
    // delta_t is zero at representable precision.
    double z_threshold_at(std::int64_t t) const;

 private:
    Schedule schedule_;
    RepetitionPolicy policy_;
};

// Result of the truncated worst-case evaluation: the mass collected through
// the horizon plus a rigorous bound on everything after it. The true
// worst-case type-1 error lies in [collected, min(collected + tail_bound, 1)].
struct AlphaEstimate {
    double collected = 0.0;
    double tail_bound = 0.0;
    std::int64_t horizon = 0;
};

// Greedy gathering of per-point false-significance mass into the earliest
// possible stopping events; the accumulated mass is the exact worst-case
// type-1 error of the repeated-significance rule through the points pushed
// so far. Entries live in a sorted multiset under a global offset, so a
// gather step (extract min, subtract it everywhere, drop zeros) is one map
// operation regardless of run lengths.
class WorstCaseAccumulator {
 public:
    // Feed decision point t's threshold and repeat requirement, in order.
    // Throws std::invalid_argument if r decreases or inputs leave [0, 1].
    void push(double delta, std::int64_t r);

    double collected() const { return collected_ < 1.0 ? collected_ : 1.0; }
    // Sum of not-yet-gathered mass still pending in the list.
    double residual_mass() const;
    std::int64_t pending() const { return count_; }
    std::int64_t last_r() const { return last_r_; }
    std::int64_t pushed() const { return pushed_; }

 private:
    std::map<double, std::int64_t> entries_;  // key = value + offset at insert
    double offset_ = 0.0;
    double collected_ = 0.0;
    std::int64_t count_ = 0;
    std::int64_t last_r_ = 1;
    std::int64_t pushed_ = 0;
};

// Worst-case type-1 error for explicit requirement sequences; the horizon is
// the sequence length. beyond_horizon_bound is a caller-supplied bound on
// sum_{t>horizon} delta_t / r_t when the sequences continue past the inputs.
AlphaEstimate worst_case_alpha(std::span<const double> deltas,
                               std::span<const std::int64_t> rs,
                               double beyond_horizon_bound = 0.0);

// Plan-driven variant: thresholds come from the plan's closed forms and the
// beyond-horizon mass uses the schedule's analytic tail.
AlphaEstimate worst_case_alpha(const TestPlan& plan, std::int64_t horizon);

// Upper bound sum_t delta_t / r_t on the worst-case type-1 error.
double corollary_bound(std::span<const double> deltas,
                       std::span<const std::int64_t> rs);
double corollary_bound(const TestPlan& plan, std::int64_t horizon);

// Always-valid comparison boundary built on autocorrelation among averages:
// z = sqrt( 2(t rho^2 + 1)/(t rho^2) * ln( sqrt(t rho^2 + 1)/alpha ) ).
double baseline_z(std::int64_t t, double rho, double alpha);

struct Finding {
    enum class Severity { info, warning, error };
    Severity severity;
    std::string message;
    std::int64_t t = 0;  // first affected decision point, 0 when n/a
};

// Non-throwing plan diagnostics: clamped thresholds, the first decision
// point where the budget underflows to zero, out-of-range policy fractions.
// The probe horizon bounds the explicit scan; exhaustion points for the
// infinite families are bisected beyond it along the monotone decay.
std::vector<Finding> validate_plan(const TestPlan& plan,
                                   std::int64_t probe_horizon = 100000);

}  // namespace repsig
