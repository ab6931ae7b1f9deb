#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "vitalink/gateway/envelope.hpp"
#include "vitalink/interpreter/vital_estimate.hpp"
#include "vitalink/orchestrator/store.hpp"

namespace vitalink::agent_tools {

inline constexpr std::int64_t kDefaultNoDataInterval = 6 * 3600;

/// Estimate with the largest burst timestamp; among equal timestamps the one
/// stored last wins. Absent when the user has no data.
std::optional<interpreter::VitalEstimate> latest_vitals(const orchestrator::Store& store,
                                                        const std::string& phone);

/// Reminder envelope iff no estimate exists or the newest is strictly older
/// than `interval_s` at `now`. Throws UnknownUser.
std::optional<gateway::ChatEnvelope> fire_no_data_check(const orchestrator::Store& store,
                                                        const std::string& phone, std::int64_t now,
                                                        std::int64_t interval_s = kDefaultNoDataInterval);

}  // namespace vitalink::agent_tools
