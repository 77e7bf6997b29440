#include "repsig/monitor.hpp"

#include <stdexcept>
#include <utility>

namespace repsig {
namespace {

// Construction-time screening probe. Clamps and policy errors appear at
// small t for every supported family, so a short scan suffices and keeps
// monitor construction cheap inside simulation loops.
constexpr std::int64_t kScreeningProbe = 1024;

}  // namespace

Monitor::Monitor(TestPlan plan)
    : plan_(std::move(plan)),
      findings_(validate_plan(plan_, kScreeningProbe)) {
    for (const Finding& f : findings_) {
        if (f.severity == Finding::Severity::error) {
            throw std::invalid_argument("invalid plan: " + f.message);
        }
    }
}

Decision Monitor::observe(double p) {
    if (stopped_) {
        throw std::logic_error("observe called on a stopped monitor");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::domain_error("p-value must lie in [0, 1]");
    }
    ++t_;
    Decision d;
    d.t = t_;
    d.delta_t = plan_.threshold_at(t_).delta;
    d.r_t = plan_.r_at(t_);
    d.hit = p <= d.delta_t;
    if (d.hit) {
        ++hits_;
    }
    d.hits = hits_;
    if (hits_ >= d.r_t) {
        stopped_ = true;
        d.stopped = true;
    }
    return d;
}

StreamResult run_stream(const TestPlan& plan, std::span<const double> ps) {
    Monitor monitor(plan);
    StreamResult res;
    for (double p : ps) {
        res.last = monitor.observe(p);
        ++res.consumed;
        if (res.last.stopped) {
            break;
        }
    }
    return res;
}

}  // namespace repsig
