#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "repsig/monitor.hpp"
#include "repsig/normal.hpp"
#include "repsig/plan.hpp"
#include "repsig/rng.hpp"
#include "repsig/simulate.hpp"
#include "repsig/spending.hpp"

using repsig::RepetitionPolicy;
using repsig::Schedule;
using repsig::SimulationConfig;
using repsig::SimulationReport;
using repsig::StreamModel;
using repsig::TestPlan;

namespace {

bool same_report(const SimulationReport& a, const SimulationReport& b) {
    const bool mean_same =
        (std::isnan(a.mean_stop_time_given_stop) &&
         std::isnan(b.mean_stop_time_given_stop)) ||
        a.mean_stop_time_given_stop == b.mean_stop_time_given_stop;
    return a.replications == b.replications && a.horizon == b.horizon &&
           a.seed == b.seed && a.stop_count == b.stop_count &&
           a.stop_probability == b.stop_probability && a.ci_lo == b.ci_lo &&
           a.ci_hi == b.ci_hi && mean_same;
}

TestPlan loose_plan() {
    // Generous budget so stops occur often at small horizons.
    return TestPlan(Schedule::geometric(0.5, 0.1),
                    RepetitionPolicy::fraction(0.2));
}

}  // namespace

TEST_CASE("identical configs reproduce bit-identical reports") {
    SimulationConfig cfg;
    cfg.replications = 5000;
    cfg.horizon = 200;
    cfg.seed = 987654321;
    for (const StreamModel& model :
         {StreamModel::iid_uniform_null(), StreamModel::brownian_null(),
          StreamModel::brownian_drift(0.05, 3)}) {
        const SimulationReport a = simulate(loose_plan(), model, cfg);
        const SimulationReport b = simulate(loose_plan(), model, cfg);
        CHECK(same_report(a, b));
    }
}

TEST_CASE("reports do not depend on the thread count") {
    SimulationConfig one;
    one.replications = 4000;
    one.horizon = 150;
    one.seed = 24680;
    one.threads = 1;
    SimulationConfig many = one;
    many.threads = 7;
    for (const StreamModel& model :
         {StreamModel::iid_uniform_null(), StreamModel::brownian_null()}) {
        const SimulationReport a = simulate(loose_plan(), model, one);
        const SimulationReport b = simulate(loose_plan(), model, many);
        CHECK(same_report(a, b));
    }
}

TEST_CASE("zero thresholds never stop") {
    const TestPlan plan(Schedule::custom({0.0, 0.0, 0.0}, 0.05),
                        RepetitionPolicy::constant(1));
    SimulationConfig cfg;
    cfg.replications = 2000;
    cfg.horizon = 3;
    for (const StreamModel& model :
         {StreamModel::iid_uniform_null(), StreamModel::brownian_null()}) {
        const SimulationReport rep = simulate(plan, model, cfg);
        CHECK(rep.stop_count == 0);
        CHECK(rep.stop_probability == 0.0);
        CHECK(std::isnan(rep.mean_stop_time_given_stop));
    }
}

TEST_CASE("single-point plan reproduces the fixed-level test") {
    const TestPlan plan(Schedule::custom({0.05}, 0.05),
                        RepetitionPolicy::constant(1));
    SimulationConfig cfg;
    cfg.replications = 100000;
    cfg.horizon = 1;
    cfg.seed = 1;
    const double se = std::sqrt(0.05 * 0.95 / 100000.0);
    for (const StreamModel& model :
         {StreamModel::iid_uniform_null(), StreamModel::brownian_null()}) {
        const SimulationReport rep = simulate(plan, model, cfg);
        CHECK(std::fabs(rep.stop_probability - 0.05) < 3.0 * se);
        CHECK(rep.ci_lo <= rep.stop_probability);
        CHECK(rep.stop_probability <= rep.ci_hi);
        CHECK(rep.ci_lo >= 0.0);
        CHECK(rep.ci_hi <= 1.0);
    }
}

TEST_CASE("stop probability is nondecreasing in the horizon") {
    SimulationConfig short_cfg;
    short_cfg.replications = 3000;
    short_cfg.horizon = 50;
    short_cfg.seed = 777;
    SimulationConfig long_cfg = short_cfg;
    long_cfg.horizon = 400;
    const SimulationReport a =
        simulate(loose_plan(), StreamModel::brownian_null(), short_cfg);
    const SimulationReport b =
        simulate(loose_plan(), StreamModel::brownian_null(), long_cfg);
    CHECK(a.stop_probability <= b.stop_probability);
}

TEST_CASE("drift raises the stopping rate over the null") {
    SimulationConfig cfg;
    cfg.replications = 3000;
    cfg.horizon = 100;
    const TestPlan plan(Schedule::geometric(0.05, 0.01),
                        RepetitionPolicy::fraction(0.1));
    const SimulationReport null_rep =
        simulate(plan, StreamModel::brownian_null(), cfg);
    const SimulationReport drift_rep =
        simulate(plan, StreamModel::brownian_drift(0.5, 1), cfg);
    CHECK(drift_rep.stop_probability > null_rep.stop_probability + 0.2);
}

TEST_CASE("simulation decisions equal a monitor replay of the same streams") {
    // Rebuild each replication's p-value stream with the same keyed
    // generator and fold it through the monitor; stop counts and times
    // must match the engine exactly.
    const TestPlan plan = loose_plan();
    SimulationConfig cfg;
    cfg.replications = 400;
    cfg.horizon = 120;
    cfg.seed = 13579;

    for (bool brownian : {false, true}) {
        const StreamModel model = brownian ? StreamModel::brownian_null()
                                           : StreamModel::iid_uniform_null();
        const SimulationReport rep = simulate(plan, model, cfg);
        std::int64_t stops = 0;
        std::int64_t time_sum = 0;
        for (std::int64_t i = 0; i < cfg.replications; ++i) {
            repsig::CounterRng rng(cfg.seed, static_cast<std::uint64_t>(i));
            std::vector<double> ps;
            double sum = 0.0;
            for (std::int64_t t = 1; t <= cfg.horizon; ++t) {
                if (brownian) {
                    sum += rng.gaussian();
                    ps.push_back(repsig::two_sided_p(
                        std::fabs(sum) / std::sqrt(static_cast<double>(t))));
                } else {
                    ps.push_back(rng.uniform01());
                }
            }
            const repsig::StreamResult res = repsig::run_stream(plan, ps);
            if (res.last.stopped) {
                ++stops;
                time_sum += res.last.t;
            }
        }
        CAPTURE(brownian);
        CHECK(rep.stop_count == stops);
        if (stops > 0) {
            CHECK(rep.mean_stop_time_given_stop ==
                  static_cast<double>(time_sum) / static_cast<double>(stops));
        }
    }
}

TEST_CASE("sweep derives per-plan seeds and keeps order") {
    const std::vector<TestPlan> plans{
        loose_plan(), TestPlan(Schedule::pseries(0.5, 1.2),
                               RepetitionPolicy::fraction(0.3))};
    SimulationConfig cfg;
    cfg.replications = 1000;
    cfg.horizon = 80;
    cfg.seed = 5;
    const auto reports = sweep(plans, StreamModel::iid_uniform_null(), cfg);
    REQUIRE(reports.size() == 2);
    // element 0 equals a direct run with the derived seed
    SimulationConfig derived = cfg;
    derived.seed = repsig::derive_key(cfg.seed, 0);
    const SimulationReport direct =
        simulate(plans[0], StreamModel::iid_uniform_null(), derived);
    CHECK(same_report(reports[0], direct));
    CHECK(reports[0].seed != reports[1].seed);

    const auto empty =
        sweep(std::vector<TestPlan>{}, StreamModel::iid_uniform_null(), cfg);
    CHECK(empty.empty());
}

TEST_CASE("config validation") {
    SimulationConfig cfg;
    cfg.replications = 0;
    cfg.horizon = 10;
    CHECK_THROWS_AS(
        simulate(loose_plan(), StreamModel::iid_uniform_null(), cfg),
        std::invalid_argument);
    cfg.replications = 10;
    cfg.horizon = 0;
    CHECK_THROWS_AS(
        simulate(loose_plan(), StreamModel::iid_uniform_null(), cfg),
        std::invalid_argument);
    CHECK_THROWS_AS(StreamModel::brownian_null(0), std::domain_error);
    CHECK_THROWS_AS(StreamModel::brownian_drift(0.1, -1), std::domain_error);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(StreamModel::brownian_drift(inf, 1), std::domain_error);
}

TEST_CASE("wilson interval tightens with more replications") {
    SimulationConfig small;
    small.replications = 1000;
    small.horizon = 50;
    SimulationConfig big = small;
    big.replications = 50000;
    const SimulationReport a =
        simulate(loose_plan(), StreamModel::iid_uniform_null(), small);
    const SimulationReport b =
        simulate(loose_plan(), StreamModel::iid_uniform_null(), big);
    CHECK(b.ci_hi - b.ci_lo < a.ci_hi - a.ci_lo);
}
