#include "repsig/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "repsig/normal.hpp"
#include "repsig/rng.hpp"

namespace repsig {

StreamModel StreamModel::iid_uniform_null() {
    return StreamModel(Rep{IidUniformNull{}});
}

StreamModel StreamModel::brownian_null(std::int64_t n_per_point) {
    if (n_per_point < 1) {
        throw std::domain_error("n_per_point must be >= 1");
    }
    return StreamModel(Rep{BrownianNull{n_per_point}});
}

StreamModel StreamModel::brownian_drift(double mu, std::int64_t n_per_point) {
    if (!std::isfinite(mu)) {
        throw std::domain_error("drift mu must be finite");
    }
    if (n_per_point < 1) {
        throw std::domain_error("n_per_point must be >= 1");
    }
    return StreamModel(Rep{BrownianDrift{mu, n_per_point}});
}

namespace {

// Per-plan tables for the replication loop. The Brownian fast path compares
// S^2 against certain-hit / certain-miss bounds in the squared-sum domain;
// only draws landing between them (width 1e-6 in z, far wider than the
// 1e-9 quantile tolerance) pay for an erfc evaluation, so every decision
// equals the definitional p_t <= delta_t comparison.
struct PlanTables {
    std::vector<double> delta;
    std::vector<std::int64_t> r;
    std::vector<double> miss2;  // S^2 below this: certainly no hit
    std::vector<double> hit2;   // S^2 above this: certainly a hit
};

PlanTables build_tables(const TestPlan& plan, std::int64_t horizon,
                        bool brownian, std::int64_t n_per_point) {
    PlanTables tab;
    const auto h = static_cast<std::size_t>(horizon);
    tab.delta.reserve(h);
    tab.r.reserve(h);
    if (brownian) {
        tab.miss2.reserve(h);
        tab.hit2.reserve(h);
    }
    for (std::int64_t t = 1; t <= horizon; ++t) {
        const double delta = plan.threshold_at(t).delta;
        tab.delta.push_back(delta);
        tab.r.push_back(plan.r_at(t));
        if (!brownian) {
            continue;
        }
        double zlo;
        double zhi;
        if (delta == 0.0) {
            // p == 0 requires erfc underflow, around z = 38.6.
            zlo = 38.0;
            zhi = 40.0;
        } else {
            const double z = two_sided_z(delta);
            zlo = std::max(0.0, z - 1e-6);
            zhi = z + 1e-6;
        }
        const double n_t =
            static_cast<double>(t) * static_cast<double>(n_per_point);
        tab.miss2.push_back(zlo * zlo * n_t);
        tab.hit2.push_back(zhi * zhi * n_t);
    }
    return tab;
}

struct Tally {
    std::int64_t stops = 0;
    std::int64_t stop_time_sum = 0;
};

Tally run_iid(const PlanTables& tab, std::uint64_t seed, std::int64_t lo,
              std::int64_t hi) {
    Tally tally;
    const auto horizon = static_cast<std::int64_t>(tab.delta.size());
    for (std::int64_t rep = lo; rep < hi; ++rep) {
        CounterRng rng(seed, static_cast<std::uint64_t>(rep));
        std::int64_t hits = 0;
        for (std::int64_t t = 1; t <= horizon; ++t) {
            const auto i = static_cast<std::size_t>(t - 1);
            if (rng.uniform01() <= tab.delta[i]) {
                if (++hits >= tab.r[i]) {
                    ++tally.stops;
                    tally.stop_time_sum += t;
                    break;
                }
            }
        }
    }
    return tally;
}

Tally run_brownian(const PlanTables& tab, std::uint64_t seed, std::int64_t lo,
                   std::int64_t hi, double mu, std::int64_t n_per_point) {
    Tally tally;
    const auto horizon = static_cast<std::int64_t>(tab.delta.size());
    // One Gaussian draw per decision point carries the whole n_per_point
    // block: mean mu*n, variance n.
    const double block_mean = mu * static_cast<double>(n_per_point);
    const double block_sd = std::sqrt(static_cast<double>(n_per_point));
    for (std::int64_t rep = lo; rep < hi; ++rep) {
        CounterRng rng(seed, static_cast<std::uint64_t>(rep));
        double sum = 0.0;
        std::int64_t hits = 0;
        for (std::int64_t t = 1; t <= horizon; ++t) {
            const auto i = static_cast<std::size_t>(t - 1);
            sum += block_mean + block_sd * rng.gaussian();
            const double s2 = sum * sum;
            bool hit;
            if (s2 > tab.hit2[i]) {
                hit = true;
            } else if (s2 < tab.miss2[i]) {
                hit = false;
            } else {
                const double n_t = static_cast<double>(t) *
                                   static_cast<double>(n_per_point);
                hit = two_sided_p(std::abs(sum) / std::sqrt(n_t)) <=
                      tab.delta[i];
            }
            if (hit && ++hits >= tab.r[i]) {
                ++tally.stops;
                tally.stop_time_sum += t;
                break;
            }
        }
    }
    return tally;
}

}  // namespace

SimulationReport simulate(const TestPlan& plan, const StreamModel& model,
                          const SimulationConfig& config) {
    if (config.replications < 1) {
        throw std::invalid_argument("replications must be >= 1");
    }
    if (config.horizon < 1) {
        throw std::invalid_argument("horizon must be >= 1");
    }

    double mu = 0.0;
    std::int64_t n_per_point = 1;
    const bool brownian = !std::holds_alternative<IidUniformNull>(model.rep());
    if (const auto* bn = std::get_if<BrownianNull>(&model.rep())) {
        n_per_point = bn->n_per_point;
    } else if (const auto* bd = std::get_if<BrownianDrift>(&model.rep())) {
        mu = bd->mu;
        n_per_point = bd->n_per_point;
    }

    const PlanTables tab =
        build_tables(plan, config.horizon, brownian, n_per_point);

    auto run_range = [&](std::int64_t lo, std::int64_t hi) {
        return brownian ? run_brownian(tab, config.seed, lo, hi, mu, n_per_point)
                        : run_iid(tab, config.seed, lo, hi);
    };

    int threads = config.threads;
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads < 1) {
            threads = 1;
        }
    }
    threads = static_cast<int>(
        std::min<std::int64_t>(threads, config.replications));

    Tally total;
    if (threads == 1) {
        total = run_range(0, config.replications);
    } else {
        std::vector<Tally> parts(static_cast<std::size_t>(threads));
        std::vector<std::thread> workers;
        workers.reserve(static_cast<std::size_t>(threads));
        const std::int64_t chunk =
            (config.replications + threads - 1) / threads;
        for (int w = 0; w < threads; ++w) {
            const std::int64_t lo = w * chunk;
            const std::int64_t hi =
                std::min(lo + chunk, config.replications);
            workers.emplace_back([&, w, lo, hi] {
                parts[static_cast<std::size_t>(w)] = run_range(lo, hi);
            });
        }
        for (auto& worker : workers) {
            worker.join();
        }
        // Integer reduction in fixed order: parallelism cannot perturb it.
        for (const Tally& part : parts) {
            total.stops += part.stops;
            total.stop_time_sum += part.stop_time_sum;
        }
    }

    SimulationReport rep;
    rep.replications = config.replications;
    rep.horizon = config.horizon;
    rep.seed = config.seed;
    rep.stop_count = total.stops;
    const double n = static_cast<double>(config.replications);
    const double phat = static_cast<double>(total.stops) / n;
    rep.stop_probability = phat;
    const double z = two_sided_z(0.05);
    const double z2n = z * z / n;
    const double denom = 1.0 + z2n;
    const double center = (phat + 0.5 * z2n) / denom;
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / n + 0.25 * z2n / n) / denom;
    rep.ci_lo = std::max(0.0, center - half);
    rep.ci_hi = std::min(1.0, center + half);
    rep.mean_stop_time_given_stop =
        total.stops > 0
            ? static_cast<double>(total.stop_time_sum) /
                  static_cast<double>(total.stops)
            : std::numeric_limits<double>::quiet_NaN();
    return rep;
}

std::vector<SimulationReport> sweep(std::span<const TestPlan> plans,
                                    const StreamModel& model,
                                    const SimulationConfig& config) {
    std::vector<SimulationReport> reports;
    reports.reserve(plans.size());
    for (std::size_t i = 0; i < plans.size(); ++i) {
        SimulationConfig derived = config;
        derived.seed = derive_key(config.seed, i);
        reports.push_back(simulate(plans[i], model, derived));
    }
    return reports;
}

}  // namespace repsig
