#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace vitalink::gateway {

enum class Direction { Inbound, Outbound };
enum class EnvelopeKind { Text, Audio, Button, Image };

std::string_view to_string(Direction d);
std::string_view to_string(EnvelopeKind k);
std::optional<EnvelopeKind> parse_kind(std::string_view text);

/// One chat message in either direction. Audio carries the uploaded recording
/// as `media_id`; image carries the chart as `media_id` with `body` as its
/// caption; an inbound button carries the pressed label as `body`.
struct ChatEnvelope {
    std::string id;
    Direction direction = Direction::Inbound;
    std::string user_phone;
    std::int64_t ts = 0;
    EnvelopeKind kind = EnvelopeKind::Text;
    std::string body;
    std::vector<std::string> buttons;
    std::optional<std::string> media_id;
    std::optional<std::string> reply_to;

    bool operator==(const ChatEnvelope&) const = default;
};

void to_json(nlohmann::json& j, const ChatEnvelope& e);
/// Throws SchemaViolation on an unknown kind or a missing required field.
void from_json(const nlohmann::json& j, ChatEnvelope& e);

}  // namespace vitalink::gateway
