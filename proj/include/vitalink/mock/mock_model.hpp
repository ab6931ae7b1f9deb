#pragma once

#include <string>

#include "vitalink/interpreter/model_client.hpp"

namespace vitalink::mock {

/// Deterministic offline model. Recognises each prompt family the system emits
/// and answers in that family's reply format:
///
///   interpreter prompt   vitals from the serialized channels (IR spectral
///                        peak for HR, ratio of ratios for SpO2, accelerometer
///                        variance for activity, wrist + 3.5 C for body temp)
///   agent context        a schema-valid agent object
///   QC review            approve
///   profile extraction   fields matched in the reply text
///   query classification heuristic tier
///
/// Pure: the reply depends only on the prompt text. Safe for concurrent use.
class MockModelClient final : public interpreter::ModelClient {
public:
    std::string complete(const std::string& prompt, const interpreter::ModelParams& params) override;
};

/// Interpreter-family reply alone; exposed for tests and the eval harness.
std::string interpret_prompt(const std::string& prompt);

/// Wrist-to-core offset the offline model applies to body temperature.
inline constexpr double kWristToCoreOffsetC = 3.5;

}  // namespace vitalink::mock
