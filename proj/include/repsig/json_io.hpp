#pragma once

#include "json.hpp"
#include "repsig/plan.hpp"
#include "repsig/simulate.hpp"
#include "repsig/spending.hpp"

namespace repsig {

// Strict parsers: the key set must match the schema for the given "kind"
// exactly; unknown or missing fields raise std::invalid_argument naming the
// field. Range checks live in the factories and surface as
// std::domain_error.
Schedule schedule_from_json(const nlohmann::json& j);
RepetitionPolicy policy_from_json(const nlohmann::json& j);
TestPlan plan_from_json(const nlohmann::json& j);
StreamModel model_from_json(const nlohmann::json& j);

nlohmann::json schedule_to_json(const Schedule& schedule);
nlohmann::json policy_to_json(const RepetitionPolicy& policy);
nlohmann::json plan_to_json(const TestPlan& plan);
nlohmann::json model_to_json(const StreamModel& model);
nlohmann::json estimate_to_json(const AlphaEstimate& estimate);

// Full simulation report; NaN mean (nothing stopped) serializes as null.
nlohmann::json report_to_json(const SimulationReport& report,
                              const TestPlan& plan, const StreamModel& model);

}  // namespace repsig
