#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "repsig/plan.hpp"

namespace repsig {

// Outcome of one observed decision point. t, delta_t, r_t and hit describe
// the point just consumed; stopped flips when cumulative hits reach r_t.
struct Decision {
    bool stopped = false;
    std::int64_t t = 0;
    std::int64_t hits = 0;
    std::int64_t r_t = 0;
    double delta_t = 0.0;
    bool hit = false;
};

// Streaming stopping-rule state machine. Consumes one p-value per decision
// point and stops at the first t where at least r_t of p_1..p_t satisfied
// p_k <= delta_k. Hits accumulate over the whole history and never expire.
// Thresholds are recomputed on demand, so streams can run unbounded.
// Single-owner mutable state: one stream, one writer.
class Monitor {
 public:
    // Screens the plan through validate_plan; error findings reject the
    // plan, info and warning findings are retained for callers to surface.
    explicit Monitor(TestPlan plan);

    // Consumes the next p-value. Throws std::logic_error once stopped and
    // std::domain_error for p outside [0, 1] (NaN included).
    Decision observe(double p);

    bool stopped() const { return stopped_; }
    std::int64_t t() const { return t_; }
    std::int64_t hits() const { return hits_; }
    const TestPlan& plan() const { return plan_; }
    const std::vector<Finding>& findings() const { return findings_; }

 private:
    TestPlan plan_;
    std::vector<Finding> findings_;
    std::int64_t t_ = 0;
    std::int64_t hits_ = 0;
    bool stopped_ = false;
};

// run_stream folds observe over a finite stream: the decision is the first
// stop, or the last continue (t = 0 for an empty stream).
struct StreamResult {
    Decision last;
    std::int64_t consumed = 0;  // p-values actually observed
};

StreamResult run_stream(const TestPlan& plan, std::span<const double> ps);

}  // namespace repsig
