#include "vitalink/interpreter/interpreter.hpp"

#include <charconv>
#include <cstdio>
#include <numeric>

#include "vitalink/error.hpp"

namespace vitalink::interpreter {

namespace {

constexpr std::string_view kInstructions =
    "You will receive ir and red ppg data at 31 Hz, and a_x, a_y, a_z accelerometer data at "
    "34 Hz, as well as body and ambient temperature data at 1 Hz.\n"
    "\n"
    "Return the heart rate and SpO2 values you think it represents, along with an activity "
    "label. Also include one sentence suggesting what kind of activity the user might be "
    "doing, as \"activity_verbose\".\n"
    "\n"
    "Return the temperatures too. Body temperature is taken at the wrist (extremity, not "
    "core), so adjust if necessary. If data are invalid, return \"N/A\".\n"
    "\n"
    "Return a JSON object as the response. Focus on outlying data.\n";

constexpr std::string_view kKeysLine =
    "Output keys: hr, spo2, activity, activity_verbose, temp_body, temp_ambient.\n";

template <typename T>
void append_counts(std::string& out, std::string_view name, double rate_hz,
                   const std::vector<T>& values) {
    char head[96];
    std::snprintf(head, sizeof head, "%.*s (%g Hz, %zu samples): [", static_cast<int>(name.size()),
                  name.data(), rate_hz, values.size());
    out += head;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(values[i]);
    }
    out += "]\n";
}

void append_temps(std::string& out, std::string_view name, const std::vector<std::uint16_t>& v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*s (1 Hz, %zu samples, C): [", static_cast<int>(name.size()),
                  name.data(), v.size());
    out += buf;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        std::snprintf(buf, sizeof buf, "%.1f", v[i] / 100.0);
        out += buf;
    }
    out += "]\n";
}

std::vector<double> parse_array(std::string_view prompt, std::string_view name) {
    std::string needle = "\n" + std::string(name) + " (";
    auto pos = prompt.find(needle);
    if (pos == std::string_view::npos) return {};
    const auto open = prompt.find('[', pos);
    const auto close = prompt.find(']', open);
    if (open == std::string_view::npos || close == std::string_view::npos) return {};
    std::vector<double> out;
    const char* p = prompt.data() + open + 1;
    const char* end = prompt.data() + close;
    while (p < end) {
        double v = 0;
        auto [next, ec] = std::from_chars(p, end, v);
        if (ec != std::errc{}) return {};
        out.push_back(v);
        p = next;
        if (p < end && *p == ',') ++p;
    }
    return out;
}

double mean_of(const std::vector<std::uint16_t>& v, double scale) {
    if (v.empty()) return 0.0;
    return std::accumulate(v.begin(), v.end(), 0.0) * scale / static_cast<double>(v.size());
}

}  // namespace

std::string_view instruction_block() { return kInstructions; }

std::string build_prompt(const wire::SensorBurst& burst) {
    wire::validate(burst);
    std::string out;
    out.reserve(8192);
    out += kInstructions;
    out += '\n';
    out += kKeysLine;
    append_counts(out, "ir", wire::kPpgRateHz, burst.ir);
    append_counts(out, "red", wire::kPpgRateHz, burst.red);
    append_counts(out, "a_x", wire::kAccelRateHz, burst.accel_x);
    append_counts(out, "a_y", wire::kAccelRateHz, burst.accel_y);
    append_counts(out, "a_z", wire::kAccelRateHz, burst.accel_z);
    append_temps(out, "body", burst.temp_wrist);
    append_temps(out, "ambient", burst.temp_ambient);
    return out;
}

PromptChannels parse_prompt_channels(std::string_view prompt) {
    PromptChannels c;
    c.ir = parse_array(prompt, "ir");
    c.red = parse_array(prompt, "red");
    c.a_x = parse_array(prompt, "a_x");
    c.a_y = parse_array(prompt, "a_y");
    c.a_z = parse_array(prompt, "a_z");
    c.body = parse_array(prompt, "body");
    c.ambient = parse_array(prompt, "ambient");
    return c;
}

VitalEstimate interpret(const wire::SensorBurst& burst, ModelClient& client,
                        const ModelParams& params) {
    params.validate();
    const std::string reply = client.complete(build_prompt(burst), params);
    VitalEstimate e = parse_reply(reply);
    e.source = EstimateSource::Llm;
    e.burst_ts = burst.ts;
    return e;
}

std::string_view to_string(InterpretStatus status) {
    switch (status) {
        case InterpretStatus::Llm: return "llm";
        case InterpretStatus::ConventionalFallback: return "conventional_fallback";
        case InterpretStatus::Unavailable: return "unavailable";
    }
    return "llm";
}

VitalEstimate conventional_vitals(const wire::SensorBurst& burst,
                                  const dsp::ConventionalConfig& config,
                                  const dsp::ActivityThresholds& activity) {
    const auto conv = dsp::estimate_conventional(burst, config);
    VitalEstimate e;
    if (conv.hr_valid) e.hr = conv.hr_bpm;
    if (conv.spo2_valid) e.spo2 = conv.spo2_pct;
    const auto label = dsp::classify_activity_baseline(burst, activity);
    e.activity = std::string(dsp::to_string(label));
    e.activity_verbose = "Activity inferred from accelerometer variance: " + *e.activity + ".";
    e.temp_body = mean_of(burst.temp_wrist, 0.01);
    e.temp_ambient = mean_of(burst.temp_ambient, 0.01);
    e.source = EstimateSource::Conventional;
    e.burst_ts = burst.ts;
    return e;
}

InterpretOutcome interpret_with_fallback(const wire::SensorBurst& burst, ModelClient& client,
                                         const ModelParams& params,
                                         const InterpretPolicy& policy) {
    InterpretOutcome out;
    for (int attempt = 0; attempt <= policy.retries; ++attempt) {
        try {
            out.estimate = interpret(burst, client, params);
            out.status = InterpretStatus::Llm;
            out.error.clear();
            return out;
        } catch (const ClientUnavailable& e) {
            out.error = e.what();
        } catch (const MalformedReply& e) {
            out.error = e.what();
            break;
        }
    }
    if (policy.fallback_to_conventional) {
        out.estimate = conventional_vitals(burst, policy.conventional, policy.activity);
        if (out.estimate.hr || out.estimate.spo2) {
            out.status = InterpretStatus::ConventionalFallback;
            return out;
        }
    }
    out.estimate = VitalEstimate{};
    out.estimate.source = EstimateSource::Unavailable;
    out.estimate.burst_ts = burst.ts;
    out.status = InterpretStatus::Unavailable;
    return out;
}

}  // namespace vitalink::interpreter
