#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "vitalink/agent_tools/chart.hpp"

namespace vitalink::orchestrator {

enum class Urgency { NotUrgent, Urgent };

std::string_view to_string(Urgency u);

/// Chart the agent asks to attach: the last `hours` of `metric`.
struct ImageRequest {
    agent_tools::ChartMetric metric = agent_tools::ChartMetric::Hr;
    int hours = 24;  // 1..720
    agent_tools::ChartKind kind = agent_tools::ChartKind::Line;

    bool operator==(const ImageRequest&) const = default;
};

/// The structured reply every agent call must produce. RESPONSES is never
/// empty; URGENCY is always set.
struct AgentOutput {
    std::variant<bool, std::string> personal = false;
    std::optional<ImageRequest> image;
    Urgency urgency = Urgency::NotUrgent;
    std::vector<std::string> responses;
    std::vector<std::string> questions;

    bool operator==(const AgentOutput&) const = default;
};

/// Strict parse of a model reply. An optional code fence is tolerated; the
/// object must carry exactly PERSONAL, IMAGE, URGENCY, RESPONSES and
/// QUESTIONS with these types:
///   PERSONAL   boolean or string
///   IMAGE      null or {"metric", "hours", "kind"}, no other keys
///   URGENCY    "urgent" or "not_urgent"
///   RESPONSES  non-empty array of non-empty strings
///   QUESTIONS  array of non-empty strings
/// Throws SchemaViolation naming the first offending field.
AgentOutput enforce_schema(std::string_view model_text);

/// Canonical JSON form, accepted by enforce_schema.
nlohmann::ordered_json to_json(const AgentOutput& out);

/// The field description placed in every agent prompt.
std::string_view output_schema_spec();

}  // namespace vitalink::orchestrator
