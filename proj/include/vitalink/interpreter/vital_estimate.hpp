#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace vitalink::interpreter {

enum class EstimateSource { Llm, Conventional, Unavailable };

std::string_view to_string(EstimateSource source);
EstimateSource parse_source(std::string_view text);

inline constexpr double kMinHr = 20.0;
inline constexpr double kMaxHr = 250.0;
inline constexpr double kMinSpo2 = 50.0;
inline constexpr double kMaxSpo2 = 100.0;

/// Per-burst vitals. An absent field is exactly a "N/A" in the model reply.
struct VitalEstimate {
    std::optional<double> hr;
    std::optional<double> spo2;
    std::optional<std::string> activity;
    std::optional<std::string> activity_verbose;
    std::optional<double> temp_body;
    std::optional<double> temp_ambient;
    EstimateSource source = EstimateSource::Llm;
    std::uint32_t burst_ts = 0;
    std::vector<std::string> clamped;  // names of fields pulled into range

    bool operator==(const VitalEstimate&) const = default;
};

/// The six-field reply object, absent fields written as "N/A".
std::string serialize_reply(const VitalEstimate& estimate);

/// Strict parse of a model reply. Accepts one JSON object, optionally inside a
/// ```json fence, with exactly the six keys. Numeric fields take a number,
/// "N/A" or null. Out-of-range HR/SpO2 are clamped and listed in `clamped`.
/// Throws MalformedReply otherwise.
VitalEstimate parse_reply(std::string_view text);

/// Trimmed text with one surrounding Markdown code fence removed, if present.
std::string_view strip_code_fence(std::string_view text);

// Storage form (includes source and burst timestamp).
void to_json(nlohmann::json& j, const VitalEstimate& e);
void from_json(const nlohmann::json& j, VitalEstimate& e);

}  // namespace vitalink::interpreter
