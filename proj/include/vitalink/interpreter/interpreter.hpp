#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "vitalink/dsp/activity.hpp"
#include "vitalink/dsp/conventional.hpp"
#include "vitalink/interpreter/model_client.hpp"
#include "vitalink/interpreter/vital_estimate.hpp"
#include "vitalink/wire/burst.hpp"

namespace vitalink::interpreter {

// Channels reach the prompt only as numbers.
static_assert(std::is_arithmetic_v<decltype(wire::SensorBurst::ir)::value_type>);
static_assert(std::is_arithmetic_v<decltype(wire::SensorBurst::accel_x)::value_type>);
static_assert(std::is_arithmetic_v<decltype(wire::SensorBurst::temp_wrist)::value_type>);

/// Fixed instruction block that opens every interpreter prompt.
std::string_view instruction_block();

/// Instruction block, expected output keys, then each channel as a compact
/// array: ADC counts as integers, temperatures in degrees C with one decimal.
std::string build_prompt(const wire::SensorBurst& burst);

/// Channels recovered from a prompt built by build_prompt. Used by the offline
/// model; missing channels are left empty.
struct PromptChannels {
    std::vector<double> ir, red, a_x, a_y, a_z, body, ambient;
};
PromptChannels parse_prompt_channels(std::string_view prompt);

/// build_prompt -> client.complete -> parse_reply. Propagates MalformedReply
/// and ClientUnavailable.
VitalEstimate interpret(const wire::SensorBurst& burst, ModelClient& client,
                        const ModelParams& params);

struct InterpretPolicy {
    int retries = 1;  // extra attempts after ClientUnavailable
    bool fallback_to_conventional = true;
    dsp::ConventionalConfig conventional;
    dsp::ActivityThresholds activity;
};

enum class InterpretStatus { Llm, ConventionalFallback, Unavailable };

std::string_view to_string(InterpretStatus status);

struct InterpretOutcome {
    VitalEstimate estimate;
    InterpretStatus status = InterpretStatus::Llm;
    std::string error;  // why the LLM path was abandoned, if it was
};

/// Sensor-path policy: LLM with one retry on outage; on outage or malformed
/// reply, the conventional estimator; failing that an all-absent estimate.
/// Always yields exactly one estimate for the burst.
InterpretOutcome interpret_with_fallback(const wire::SensorBurst& burst, ModelClient& client,
                                         const ModelParams& params,
                                         const InterpretPolicy& policy = {});

/// Conventional estimate expressed as a VitalEstimate (gated values absent,
/// wrist temperature reported unadjusted).
VitalEstimate conventional_vitals(const wire::SensorBurst& burst,
                                  const dsp::ConventionalConfig& config = {},
                                  const dsp::ActivityThresholds& activity = {});

}  // namespace vitalink::interpreter
