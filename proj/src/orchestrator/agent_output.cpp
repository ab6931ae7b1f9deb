#include "vitalink/orchestrator/agent_output.hpp"

#include <algorithm>
#include <array>
#include <set>

#include "vitalink/error.hpp"
#include "vitalink/interpreter/vital_estimate.hpp"

namespace vitalink::orchestrator {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(Urgency u) { return u == Urgency::Urgent ? "urgent" : "not_urgent"; }

namespace {

constexpr std::array<std::string_view, 5> kFields = {"PERSONAL", "IMAGE", "URGENCY", "RESPONSES",
                                                     "QUESTIONS"};

std::vector<std::string> string_list(const json& v, std::string_view field, bool non_empty) {
    if (!v.is_array()) throw SchemaViolation(std::string(field) + " must be an array");
    if (non_empty && v.empty()) throw SchemaViolation(std::string(field) + " must not be empty");
    std::vector<std::string> out;
    for (const auto& item : v) {
        if (!item.is_string() || item.get<std::string>().empty()) {
            throw SchemaViolation(std::string(field) + " entries must be non-empty strings");
        }
        out.push_back(item.get<std::string>());
    }
    return out;
}

ImageRequest image_request(const json& v) {
    if (!v.is_object()) throw SchemaViolation("IMAGE must be null or an object");
    for (const auto& [key, _] : v.items()) {
        if (key != "metric" && key != "hours" && key != "kind") {
            throw SchemaViolation("IMAGE has unknown key " + key);
        }
    }
    ImageRequest r;
    if (!v.contains("metric") || !v["metric"].is_string()) throw SchemaViolation("IMAGE.metric missing");
    const auto metric = agent_tools::parse_metric(v["metric"].get<std::string>());
    if (!metric) throw SchemaViolation("IMAGE.metric unknown: " + v["metric"].get<std::string>());
    r.metric = *metric;
    if (v.contains("hours")) {
        if (!v["hours"].is_number_integer()) throw SchemaViolation("IMAGE.hours must be an integer");
        r.hours = v["hours"].get<int>();
        if (r.hours < 1 || r.hours > 720) throw SchemaViolation("IMAGE.hours out of range");
    }
    if (v.contains("kind")) {
        const auto kind = v["kind"].is_string() ? agent_tools::parse_chart_kind(v["kind"].get<std::string>())
                                                : std::nullopt;
        if (!kind) throw SchemaViolation("IMAGE.kind must be line or histogram");
        r.kind = *kind;
    }
    return r;
}

}  // namespace

AgentOutput enforce_schema(std::string_view model_text) {
    const json j = json::parse(interpreter::strip_code_fence(model_text), nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw SchemaViolation("reply is not a JSON object");
    for (const auto& [key, _] : j.items()) {
        if (std::find(kFields.begin(), kFields.end(), key) == kFields.end()) {
            throw SchemaViolation("unknown field " + key);
        }
    }
    for (auto f : kFields) {
        if (!j.contains(std::string(f))) throw SchemaViolation("missing field " + std::string(f));
    }

    AgentOutput out;
    const json& personal = j["PERSONAL"];
    if (personal.is_boolean()) {
        out.personal = personal.get<bool>();
    } else if (personal.is_string()) {
        out.personal = personal.get<std::string>();
    } else {
        throw SchemaViolation("PERSONAL must be a boolean or a string");
    }

    if (!j["IMAGE"].is_null()) out.image = image_request(j["IMAGE"]);

    const json& urgency = j["URGENCY"];
    if (urgency == "urgent") {
        out.urgency = Urgency::Urgent;
    } else if (urgency == "not_urgent") {
        out.urgency = Urgency::NotUrgent;
    } else {
        throw SchemaViolation("URGENCY must be \"urgent\" or \"not_urgent\"");
    }

    out.responses = string_list(j["RESPONSES"], "RESPONSES", true);
    out.questions = string_list(j["QUESTIONS"], "QUESTIONS", false);
    return out;
}

ordered_json to_json(const AgentOutput& out) {
    ordered_json j;
    std::visit([&](const auto& v) { j["PERSONAL"] = v; }, out.personal);
    if (out.image) {
        j["IMAGE"] = {{"metric", agent_tools::to_string(out.image->metric)},
                      {"hours", out.image->hours},
                      {"kind", out.image->kind == agent_tools::ChartKind::Line ? "line" : "histogram"}};
    } else {
        j["IMAGE"] = nullptr;
    }
    j["URGENCY"] = to_string(out.urgency);
    j["RESPONSES"] = out.responses;
    j["QUESTIONS"] = out.questions;
    return j;
}

std::string_view output_schema_spec() {
    return "Reply with one JSON object and nothing else. It has exactly these keys:\n"
           "PERSONAL: true when the reply uses the user's own data, else false (or a short note).\n"
           "IMAGE: null, or {\"metric\": \"hr\"|\"spo2\"|\"temp_body\"|\"temp_ambient\"|\"activity\", "
           "\"hours\": 1-720, \"kind\": \"line\"|\"histogram\"} to attach a chart.\n"
           "URGENCY: \"urgent\" if the user may need prompt attention, else \"not_urgent\".\n"
           "RESPONSES: list of short chat messages, sent in order. At least one.\n"
           "QUESTIONS: list of up to three suggested follow-up questions shown as buttons.";
}

}  // namespace vitalink::orchestrator
