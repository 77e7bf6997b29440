#include "repsig/plan.hpp"

#include <algorithm>
#include <cmath>

#include "repsig/normal.hpp"

namespace repsig {
namespace {

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

RepetitionPolicy RepetitionPolicy::fraction(double u) {
    if (!(u > 0.0 && u <= 1.0)) {
        throw std::domain_error("fraction policy requires u in (0, 1]");
    }
    return RepetitionPolicy(Rep{FractionPolicy{u}});
}

RepetitionPolicy RepetitionPolicy::constant(std::int64_t r) {
    if (r < 1) {
        throw std::domain_error("constant policy requires r >= 1");
    }
    return RepetitionPolicy(Rep{ConstantPolicy{r}});
}

RepetitionPolicy RepetitionPolicy::custom(std::vector<std::int64_t> values) {
    if (values.empty()) {
        throw std::domain_error("custom policy requires at least one value");
    }
    std::int64_t prev = 1;
    for (std::int64_t r : values) {
        if (r < prev) {
            throw std::domain_error(
                "custom policy values must be nondecreasing and >= 1");
        }
        prev = r;
    }
    return RepetitionPolicy(Rep{CustomPolicy{std::move(values)}});
}

std::int64_t RepetitionPolicy::r_at(std::int64_t t) const {
    if (t < 1) {
        throw std::domain_error("decision point index t must be >= 1");
    }
    return std::visit(
        [t](const auto& p) -> std::int64_t {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FractionPolicy>) {
                const auto r = static_cast<std::int64_t>(
                    std::ceil(p.u * static_cast<double>(t)));
                return r < 1 ? 1 : r;
            } else if constexpr (std::is_same_v<T, ConstantPolicy>) {
                return p.r;
            } else {
                const auto n = static_cast<std::int64_t>(p.values.size());
                return p.values[static_cast<std::size_t>(std::min(t, n) - 1)];
            }
        },
        rep_);
}

Threshold TestPlan::threshold_at(std::int64_t t) const {
    const AlphaValue a = schedule_.alpha_at(t);
    Threshold thr;
    thr.exhausted = a.exhausted;
    thr.delta = a.value * static_cast<double>(policy_.r_at(t));
    if (thr.delta > 1.0) {
        thr.delta = 1.0;
        thr.clamped = true;
    }
    return thr;
}

double TestPlan::z_threshold_at(std::int64_t t) const {
    const Threshold thr = threshold_at(t);
    if (thr.delta == 0.0) {
        throw BudgetExhaustedError(t);
    }
    return two_sided_z(thr.delta);
}

void WorstCaseAccumulator::push(double delta, std::int64_t r) {
    if (!(delta >= 0.0 && delta <= 1.0)) {
        throw std::invalid_argument("delta must lie in [0, 1]");
    }
    if (r < last_r_) {
        throw std::invalid_argument(
            "repeat requirements must be nondecreasing");
    }
    last_r_ = r;
    ++pushed_;
    if (r == 1) {
        // Nondecreasing r means the list is empty here; the gather would
        // extract this same delta immediately. Adding it directly keeps the
        // r = 1 degenerate case an exact running sum.
        collected_ += delta;
        return;
    }
    ++entries_[delta + offset_];
    ++count_;
    if (count_ == r) {
        const auto it = entries_.begin();
        const double min_key = it->first;
        collected_ += min_key - offset_;
        count_ -= it->second;
        offset_ = min_key;
        entries_.erase(it);
    }
}

double WorstCaseAccumulator::residual_mass() const {
    KahanSum mass;
    for (const auto& [key, n] : entries_) {
        mass.add((key - offset_) * static_cast<double>(n));
    }
    return mass.sum;
}

namespace {

AlphaEstimate finish_estimate(const WorstCaseAccumulator& acc,
                              std::int64_t horizon, std::int64_t r_horizon,
                              double beyond_horizon_bound) {
    AlphaEstimate est;
    est.horizon = horizon;
    est.collected = acc.collected();
    double tail = acc.residual_mass() / static_cast<double>(r_horizon) +
                  beyond_horizon_bound;
    est.tail_bound = std::min(tail, 1.0 - est.collected);
    if (est.tail_bound < 0.0) {
        est.tail_bound = 0.0;
    }
    return est;
}

}  // namespace

AlphaEstimate worst_case_alpha(std::span<const double> deltas,
                               std::span<const std::int64_t> rs,
                               double beyond_horizon_bound) {
    if (deltas.empty() || deltas.size() != rs.size()) {
        throw std::invalid_argument(
            "worst_case_alpha requires matching nonempty delta and r sequences");
    }
    WorstCaseAccumulator acc;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (rs[i] < 1) {
            throw std::invalid_argument("repeat requirements must be >= 1");
        }
        acc.push(deltas[i], rs[i]);
    }
    return finish_estimate(acc, static_cast<std::int64_t>(deltas.size()),
                           rs.back(), beyond_horizon_bound);
}

AlphaEstimate worst_case_alpha(const TestPlan& plan, std::int64_t horizon) {
    if (horizon < 1) {
        throw std::invalid_argument("horizon must be >= 1");
    }
    WorstCaseAccumulator acc;
    for (std::int64_t t = 1; t <= horizon; ++t) {
        acc.push(plan.threshold_at(t).delta, plan.r_at(t));
    }
    // Beyond the horizon each delta_t contributes at most delta_t / r_t,
    // which is at most alpha_t, so the schedule's analytic tail bounds it.
    const double beyond = std::max(
        0.0, plan.schedule().total_alpha() - plan.schedule().partial_sum(horizon));
    return finish_estimate(acc, horizon, plan.r_at(horizon), beyond);
}

double corollary_bound(std::span<const double> deltas,
                       std::span<const std::int64_t> rs) {
    if (deltas.empty() || deltas.size() != rs.size()) {
        throw std::invalid_argument(
            "corollary_bound requires matching nonempty delta and r sequences");
    }
    KahanSum sum;
    std::int64_t prev = 1;
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        if (rs[i] < prev) {
            throw std::invalid_argument(
                "repeat requirements must be nondecreasing");
        }
        prev = rs[i];
        sum.add(deltas[i] / static_cast<double>(rs[i]));
    }
    return std::min(sum.sum, 1.0);
}

double corollary_bound(const TestPlan& plan, std::int64_t horizon) {
    if (horizon < 1) {
        throw std::invalid_argument("horizon must be >= 1");
    }
    KahanSum sum;
    for (std::int64_t t = 1; t <= horizon; ++t) {
        sum.add(plan.threshold_at(t).delta /
                static_cast<double>(plan.r_at(t)));
    }
    sum.add(std::max(0.0, plan.schedule().total_alpha() -
                              plan.schedule().partial_sum(horizon)));
    return std::min(sum.sum, 1.0);
}

double baseline_z(std::int64_t t, double rho, double alpha) {
    if (t < 1) {
        throw std::domain_error("decision point index t must be >= 1");
    }
    if (!(rho > 0.0) || !std::isfinite(rho)) {
        throw std::domain_error("rho must be positive and finite");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("alpha must lie in (0, 1)");
    }
    const double x = static_cast<double>(t) * rho * rho;
    return std::sqrt(2.0 * (x + 1.0) / x *
                     (0.5 * std::log1p(x) - std::log(alpha)));
}

namespace {

// The infinite spending families decay monotonically, so the underflow
// boundary can be bisected. lo is known good, hi known exhausted.
std::int64_t bisect_exhaustion(const Schedule& schedule, std::int64_t lo,
                               std::int64_t hi) {
    while (hi - lo > 1) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (schedule.alpha_at(mid).exhausted) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace

std::vector<Finding> validate_plan(const TestPlan& plan,
                                   std::int64_t probe_horizon) {
    std::vector<Finding> findings;
    const Schedule& sched = plan.schedule();

    if (const auto* frac =
            std::get_if<FractionPolicy>(&plan.policy().rep())) {
        if (!(frac->u > 0.0 && frac->u <= 1.0)) {
            findings.push_back({Finding::Severity::error,
                                "fraction policy u outside (0, 1]", 0});
        }
    }

    // Probe must cover any finite parameter lists so no r step or custom
    // spend value escapes the clamp scan.
    std::int64_t probe = std::max<std::int64_t>(probe_horizon, 1);
    if (const auto* cs = std::get_if<CustomSpending>(&sched.rep())) {
        probe = std::max(probe,
                         static_cast<std::int64_t>(cs->values.size()) + 1);
    }
    if (const auto* cp = std::get_if<CustomPolicy>(&plan.policy().rep())) {
        probe = std::max(probe,
                         static_cast<std::int64_t>(cp->values.size()) + 1);
    }

    std::int64_t first_clamped = 0;
    std::int64_t first_exhausted = 0;
    for (std::int64_t t = 1; t <= probe; ++t) {
        const Threshold thr = plan.threshold_at(t);
        if (thr.clamped && first_clamped == 0) {
            first_clamped = t;
        }
        if (thr.exhausted) {
            first_exhausted = t;
            break;
        }
    }

    if (first_exhausted == 0 &&
        !std::holds_alternative<CustomSpending>(sched.rep())) {
        constexpr std::int64_t kLimit = 4000000000000000000;  // below 2^63
        if (sched.alpha_at(kLimit).exhausted) {
            first_exhausted = bisect_exhaustion(sched, probe, kLimit);
        }
    }

    if (first_clamped != 0) {
        findings.push_back({Finding::Severity::warning,
                            "threshold delta_t clamped to 1 starting at t=" +
                                std::to_string(first_clamped),
                            first_clamped});
    }
    if (first_exhausted != 0) {
        findings.push_back({Finding::Severity::info,
                            "budget underflows to zero at t=" +
                                std::to_string(first_exhausted),
                            first_exhausted});
    }
    return findings;
}

}  // namespace repsig
