#include "repsig/json_io.hpp"

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace repsig {
namespace {

using nlohmann::json;

// Exact key-set check: every present key must be expected and every
// expected key present.
void require_keys(const json& j, std::initializer_list<const char*> keys,
                  const char* what) {
    if (!j.is_object()) {
        throw std::invalid_argument(std::string(what) +
                                    " must be a JSON object");
    }
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* k : keys) {
            if (item.key() == k) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw std::invalid_argument("unknown field \"" + item.key() +
                                        "\" in " + what);
        }
    }
    for (const char* k : keys) {
        if (!j.contains(k)) {
            throw std::invalid_argument("missing field \"" + std::string(k) +
                                        "\" in " + what);
        }
    }
}

double number_field(const json& j, const char* key, const char* what) {
    const json& v = j.at(key);
    if (!v.is_number()) {
        throw std::invalid_argument("field \"" + std::string(key) + "\" in " +
                                    what + " must be a number");
    }
    return v.get<double>();
}

std::int64_t integer_field(const json& j, const char* key, const char* what) {
    const json& v = j.at(key);
    if (!v.is_number_integer()) {
        throw std::invalid_argument("field \"" + std::string(key) + "\" in " +
                                    what + " must be an integer");
    }
    return v.get<std::int64_t>();
}

std::string kind_field(const json& j, const char* what) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
        throw std::invalid_argument(std::string(what) +
                                    " requires a string \"kind\" field");
    }
    return j.at("kind").get<std::string>();
}

}  // namespace

Schedule schedule_from_json(const json& j) {
    const std::string kind = kind_field(j, "schedule");
    if (kind == "geometric") {
        require_keys(j, {"kind", "alpha", "w"}, "geometric schedule");
        return Schedule::geometric(number_field(j, "alpha", "schedule"),
                                   number_field(j, "w", "schedule"));
    }
    if (kind == "pseries") {
        require_keys(j, {"kind", "alpha", "v"}, "pseries schedule");
        return Schedule::pseries(number_field(j, "alpha", "schedule"),
                                 number_field(j, "v", "schedule"));
    }
    if (kind == "headless_pseries") {
        require_keys(j, {"kind", "alpha", "v", "s"},
                     "headless_pseries schedule");
        return Schedule::headless_pseries(
            number_field(j, "alpha", "schedule"),
            number_field(j, "v", "schedule"),
            integer_field(j, "s", "schedule"));
    }
    if (kind == "custom") {
        require_keys(j, {"kind", "alpha", "values"}, "custom schedule");
        const json& arr = j.at("values");
        if (!arr.is_array()) {
            throw std::invalid_argument(
                "field \"values\" in schedule must be an array of numbers");
        }
        std::vector<double> values;
        values.reserve(arr.size());
        for (const json& v : arr) {
            if (!v.is_number()) {
                throw std::invalid_argument(
                    "field \"values\" in schedule must be an array of numbers");
            }
            values.push_back(v.get<double>());
        }
        return Schedule::custom(std::move(values),
                                number_field(j, "alpha", "schedule"));
    }
    throw std::invalid_argument("unknown schedule kind \"" + kind + "\"");
}

RepetitionPolicy policy_from_json(const json& j) {
    const std::string kind = kind_field(j, "policy");
    if (kind == "fraction") {
        require_keys(j, {"kind", "u"}, "fraction policy");
        return RepetitionPolicy::fraction(number_field(j, "u", "policy"));
    }
    if (kind == "constant") {
        require_keys(j, {"kind", "r"}, "constant policy");
        return RepetitionPolicy::constant(integer_field(j, "r", "policy"));
    }
    if (kind == "custom") {
        require_keys(j, {"kind", "values"}, "custom policy");
        const json& arr = j.at("values");
        if (!arr.is_array()) {
            throw std::invalid_argument(
                "field \"values\" in policy must be an array of integers");
        }
        std::vector<std::int64_t> values;
        values.reserve(arr.size());
        for (const json& v : arr) {
            if (!v.is_number_integer()) {
                throw std::invalid_argument(
                    "field \"values\" in policy must be an array of integers");
            }
            values.push_back(v.get<std::int64_t>());
        }
        return RepetitionPolicy::custom(std::move(values));
    }
    throw std::invalid_argument("unknown policy kind \"" + kind + "\"");
}

TestPlan plan_from_json(const json& j) {
    require_keys(j, {"schedule", "policy"}, "plan");
    return TestPlan(schedule_from_json(j.at("schedule")),
                    policy_from_json(j.at("policy")));
}

StreamModel model_from_json(const json& j) {
    const std::string kind = kind_field(j, "model");
    if (kind == "iid_uniform_null") {
        require_keys(j, {"kind"}, "iid_uniform_null model");
        return StreamModel::iid_uniform_null();
    }
    if (kind == "brownian_null") {
        require_keys(j, {"kind", "n_per_point"}, "brownian_null model");
        return StreamModel::brownian_null(
            integer_field(j, "n_per_point", "model"));
    }
    if (kind == "brownian_drift") {
        require_keys(j, {"kind", "mu", "n_per_point"}, "brownian_drift model");
        return StreamModel::brownian_drift(
            number_field(j, "mu", "model"),
            integer_field(j, "n_per_point", "model"));
    }
    throw std::invalid_argument("unknown model kind \"" + kind + "\"");
}

json schedule_to_json(const Schedule& schedule) {
    return std::visit(
        [](const auto& s) -> json {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, GeometricSpending>) {
                return {{"kind", "geometric"}, {"alpha", s.alpha}, {"w", s.w}};
            } else if constexpr (std::is_same_v<T, PSeriesSpending>) {
                return {{"kind", "pseries"}, {"alpha", s.alpha}, {"v", s.v}};
            } else if constexpr (std::is_same_v<T, HeadlessPSeriesSpending>) {
                return {{"kind", "headless_pseries"},
                        {"alpha", s.alpha},
                        {"v", s.v},
                        {"s", s.s}};
            } else {
                return {{"kind", "custom"},
                        {"alpha", s.alpha},
                        {"values", s.values}};
            }
        },
        schedule.rep());
}

json policy_to_json(const RepetitionPolicy& policy) {
    return std::visit(
        [](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, FractionPolicy>) {
                return {{"kind", "fraction"}, {"u", p.u}};
            } else if constexpr (std::is_same_v<T, ConstantPolicy>) {
                return {{"kind", "constant"}, {"r", p.r}};
            } else {
                return {{"kind", "custom"}, {"values", p.values}};
            }
        },
        policy.rep());
}

json plan_to_json(const TestPlan& plan) {
    return {{"schedule", schedule_to_json(plan.schedule())},
            {"policy", policy_to_json(plan.policy())}};
}

json model_to_json(const StreamModel& model) {
    return std::visit(
        [](const auto& m) -> json {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, IidUniformNull>) {
                return {{"kind", "iid_uniform_null"}};
            } else if constexpr (std::is_same_v<T, BrownianNull>) {
                return {{"kind", "brownian_null"},
                        {"n_per_point", m.n_per_point}};
            } else {
                return {{"kind", "brownian_drift"},
                        {"mu", m.mu},
                        {"n_per_point", m.n_per_point}};
            }
        },
        model.rep());
}

json estimate_to_json(const AlphaEstimate& estimate) {
    return {{"collected", estimate.collected},
            {"tail_bound", estimate.tail_bound},
            {"horizon", estimate.horizon}};
}

json report_to_json(const SimulationReport& report, const TestPlan& plan,
                    const StreamModel& model) {
    json j{{"plan", plan_to_json(plan)},
           {"model", model_to_json(model)},
           {"replications", report.replications},
           {"horizon", report.horizon},
           {"seed", report.seed},
           {"stop_probability", report.stop_probability},
           {"ci95", json::array({report.ci_lo, report.ci_hi})}};
    if (std::isnan(report.mean_stop_time_given_stop)) {
        j["mean_stop_time_given_stop"] = nullptr;
    } else {
        j["mean_stop_time_given_stop"] = report.mean_stop_time_given_stop;
    }
    return j;
}

}  // namespace repsig
