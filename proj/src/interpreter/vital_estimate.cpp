#include "vitalink/interpreter/vital_estimate.hpp"

#include <algorithm>
#include <array>

#include "vitalink/error.hpp"

namespace vitalink::interpreter {

using nlohmann::json;
using nlohmann::ordered_json;

std::string_view to_string(EstimateSource source) {
    switch (source) {
        case EstimateSource::Llm: return "llm";
        case EstimateSource::Conventional: return "conventional";
        case EstimateSource::Unavailable: return "unavailable";
    }
    return "llm";
}

EstimateSource parse_source(std::string_view text) {
    if (text == "conventional") return EstimateSource::Conventional;
    if (text == "unavailable") return EstimateSource::Unavailable;
    return EstimateSource::Llm;
}

namespace {

constexpr std::string_view kNa = "N/A";
constexpr std::array<std::string_view, 6> kKeys = {"hr",        "spo2",      "activity",
                                                   "activity_verbose", "temp_body", "temp_ambient"};

template <typename T>
ordered_json or_na(const std::optional<T>& v) {
    return v ? ordered_json(*v) : ordered_json(kNa);
}

std::string_view strip_fence(std::string_view text) {
    auto trim = [](std::string_view s) {
        const auto first = s.find_first_not_of(" \t\r\n");
        if (first == std::string_view::npos) return std::string_view{};
        const auto last = s.find_last_not_of(" \t\r\n");
        return s.substr(first, last - first + 1);
    };
    text = trim(text);
    if (text.starts_with("```")) {
        const auto nl = text.find('\n');
        if (nl == std::string_view::npos || !text.ends_with("```") || text.size() < 6) {
            return text;
        }
        text = trim(text.substr(nl + 1, text.size() - nl - 1 - 3));
    }
    return text;
}

std::optional<double> numeric_field(const json& obj, std::string_view key) {
    const json& v = obj.at(std::string(key));
    if (v.is_null()) return std::nullopt;
    if (v.is_string() && v.get<std::string>() == kNa) return std::nullopt;
    if (v.is_number()) return v.get<double>();
    throw MalformedReply("field '" + std::string(key) + "' must be a number or \"N/A\"");
}

std::optional<std::string> text_field(const json& obj, std::string_view key) {
    const json& v = obj.at(std::string(key));
    if (v.is_null()) return std::nullopt;
    if (!v.is_string()) {
        throw MalformedReply("field '" + std::string(key) + "' must be a string");
    }
    auto s = v.get<std::string>();
    if (s == kNa) return std::nullopt;
    return s;
}

void clamp_into(std::optional<double>& v, double lo, double hi, const char* name,
                std::vector<std::string>& clamped) {
    if (v && (*v < lo || *v > hi)) {
        v = std::clamp(*v, lo, hi);
        clamped.emplace_back(name);
    }
}

}  // namespace

std::string_view strip_code_fence(std::string_view text) { return strip_fence(text); }

std::string serialize_reply(const VitalEstimate& e) {
    ordered_json j;
    j["hr"] = or_na(e.hr);
    j["spo2"] = or_na(e.spo2);
    j["activity"] = or_na(e.activity);
    j["activity_verbose"] = or_na(e.activity_verbose);
    j["temp_body"] = or_na(e.temp_body);
    j["temp_ambient"] = or_na(e.temp_ambient);
    return j.dump();
}

VitalEstimate parse_reply(std::string_view text) {
    const std::string_view body = strip_fence(text);
    json obj = json::parse(body.begin(), body.end(), nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object()) {
        throw MalformedReply("reply is not a JSON object");
    }
    for (auto key : kKeys) {
        if (!obj.contains(std::string(key))) {
            throw MalformedReply("missing field '" + std::string(key) + "'");
        }
    }
    for (const auto& item : obj.items()) {
        if (std::ranges::find(kKeys, item.key()) == kKeys.end()) {
            throw MalformedReply("unexpected field '" + item.key() + "'");
        }
    }

    VitalEstimate e;
    e.hr = numeric_field(obj, "hr");
    e.spo2 = numeric_field(obj, "spo2");
    e.activity = text_field(obj, "activity");
    e.activity_verbose = text_field(obj, "activity_verbose");
    e.temp_body = numeric_field(obj, "temp_body");
    e.temp_ambient = numeric_field(obj, "temp_ambient");
    clamp_into(e.hr, kMinHr, kMaxHr, "hr", e.clamped);
    clamp_into(e.spo2, kMinSpo2, kMaxSpo2, "spo2", e.clamped);
    return e;
}

void to_json(json& j, const VitalEstimate& e) {
    auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };
    j = json{{"hr", opt(e.hr)},
             {"spo2", opt(e.spo2)},
             {"activity", opt(e.activity)},
             {"activity_verbose", opt(e.activity_verbose)},
             {"temp_body", opt(e.temp_body)},
             {"temp_ambient", opt(e.temp_ambient)},
             {"source", std::string(to_string(e.source))},
             {"burst_ts", e.burst_ts},
             {"clamped", e.clamped}};
}

void from_json(const json& j, VitalEstimate& e) {
    auto num = [&](const char* k) -> std::optional<double> {
        if (!j.contains(k) || j.at(k).is_null()) return std::nullopt;
        return j.at(k).get<double>();
    };
    auto str = [&](const char* k) -> std::optional<std::string> {
        if (!j.contains(k) || j.at(k).is_null()) return std::nullopt;
        return j.at(k).get<std::string>();
    };
    e.hr = num("hr");
    e.spo2 = num("spo2");
    e.activity = str("activity");
    e.activity_verbose = str("activity_verbose");
    e.temp_body = num("temp_body");
    e.temp_ambient = num("temp_ambient");
    e.source = parse_source(j.value("source", std::string("llm")));
    e.burst_ts = j.value("burst_ts", std::uint32_t{0});
    e.clamped = j.value("clamped", std::vector<std::string>{});
}

}  // namespace vitalink::interpreter
