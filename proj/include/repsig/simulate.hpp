#pragma once

#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include "repsig/plan.hpp"

namespace repsig {

// p_t independent Uniform(0, 1): the idealized null.
struct IidUniformNull {};

// Cumulative sums of unit-variance Gaussian increments; at decision point t
// the test statistic is Z_t = S_{n_t} / sqrt(n_t) with n_t = t * n_per_point
// and p_t = two_sided_p(|Z_t|). Null means zero drift. This is the
// correlated stream a real monitored experiment produces.
struct BrownianNull {
    std::int64_t n_per_point = 1;
};

// Same cumulative stream with mean mu per observation.
struct BrownianDrift {
    double mu = 0.0;
    std::int64_t n_per_point = 1;
};

class StreamModel {
 public:
    using Rep = std::variant<IidUniformNull, BrownianNull, BrownianDrift>;

    static StreamModel iid_uniform_null();
    static StreamModel brownian_null(std::int64_t n_per_point = 1);
    static StreamModel brownian_drift(double mu, std::int64_t n_per_point = 1);

    const Rep& rep() const { return rep_; }

 private:
    explicit StreamModel(Rep rep) : rep_(std::move(rep)) {}
    Rep rep_;
};

// Reproducibility by default: the seed is a fixed documented constant, not
// entropy.
constexpr std::uint64_t kDefaultSeed = 4242424242ULL;

struct SimulationConfig {
    std::int64_t replications = 0;
    std::int64_t horizon = 0;
    std::uint64_t seed = kDefaultSeed;
    int threads = 0;  // 0 picks the hardware concurrency
};

// Aggregates are exact integers before the final divisions, so the report
// is bit-identical for any thread count.
struct SimulationReport {
    std::int64_t replications = 0;
    std::int64_t horizon = 0;
    std::uint64_t seed = 0;
    std::int64_t stop_count = 0;
    double stop_probability = 0.0;
    double ci_lo = 0.0;  // 95% Wilson score interval
    double ci_hi = 0.0;
    double mean_stop_time_given_stop = 0.0;  // NaN when nothing stopped
};

// Runs the stopping rule against replicated model streams. Each replication
// draws from a counter-based generator keyed by (seed, replication index),
// so results do not depend on how replications are scheduled. Stop decisions
// reproduce the monitor's p_t <= delta_t comparison exactly; the Brownian
// models shortcut through a squared-sum comparison with an erfc fallback in
// a guard band around the threshold.
SimulationReport simulate(const TestPlan& plan, const StreamModel& model,
                          const SimulationConfig& config);

// One report per plan, order-stable, each with an independent seed derived
// from config.seed. An empty plan list yields an empty result.
std::vector<SimulationReport> sweep(std::span<const TestPlan> plans,
                                    const StreamModel& model,
                                    const SimulationConfig& config);

}  // namespace repsig
