#include "vitalink/agent_tools/tools.hpp"

#include "vitalink/error.hpp"

namespace vitalink::agent_tools {

std::optional<interpreter::VitalEstimate> latest_vitals(const orchestrator::Store& store,
                                                        const std::string& phone) {
    const auto all = store.vitals(phone);  // sorted by (burst_ts, seq)
    if (all.empty()) return std::nullopt;
    return all.back().estimate;
}

std::optional<gateway::ChatEnvelope> fire_no_data_check(const orchestrator::Store& store,
                                                        const std::string& phone, std::int64_t now,
                                                        std::int64_t interval_s) {
    const auto user = store.user(phone);
    if (!user) throw UnknownUser(phone);
    if (const auto latest = latest_vitals(store, phone)) {
        if (now - static_cast<std::int64_t>(latest->burst_ts) <= interval_s) return std::nullopt;
    }
    gateway::ChatEnvelope env;
    env.direction = gateway::Direction::Outbound;
    env.user_phone = phone;
    env.ts = now;
    env.kind = gateway::EnvelopeKind::Text;
    const std::string hours = std::to_string(interval_s / 3600);
    env.body = "Hi" + (user->name ? " " + *user->name : std::string()) +
               ", I haven't received any readings from your band in the last " + hours +
               " hours. Please check that it is charged, worn and near your phone.";
    env.buttons = {"My band is charged", "Pause uploads"};
    return env;
}

}  // namespace vitalink::agent_tools
