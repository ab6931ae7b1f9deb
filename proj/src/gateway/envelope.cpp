#include "vitalink/gateway/envelope.hpp"

#include "vitalink/error.hpp"

namespace vitalink::gateway {

using nlohmann::json;

std::string_view to_string(Direction d) { return d == Direction::Inbound ? "inbound" : "outbound"; }

std::string_view to_string(EnvelopeKind k) {
    switch (k) {
        case EnvelopeKind::Text: return "text";
        case EnvelopeKind::Audio: return "audio";
        case EnvelopeKind::Button: return "button";
        case EnvelopeKind::Image: return "image";
    }
    return "text";
}

std::optional<EnvelopeKind> parse_kind(std::string_view text) {
    if (text == "text") return EnvelopeKind::Text;
    if (text == "audio") return EnvelopeKind::Audio;
    if (text == "button") return EnvelopeKind::Button;
    if (text == "image") return EnvelopeKind::Image;
    return std::nullopt;
}

void to_json(json& j, const ChatEnvelope& e) {
    j = json{{"id", e.id},
             {"direction", std::string(to_string(e.direction))},
             {"user_phone", e.user_phone},
             {"ts", e.ts},
             {"kind", std::string(to_string(e.kind))},
             {"body", e.body},
             {"buttons", e.buttons},
             {"media_id", e.media_id ? json(*e.media_id) : json(nullptr)},
             {"reply_to", e.reply_to ? json(*e.reply_to) : json(nullptr)}};
}

void from_json(const json& j, ChatEnvelope& e) {
    if (!j.is_object()) throw SchemaViolation("envelope must be an object");
    auto str = [&](const char* key, bool required) -> std::optional<std::string> {
        if (!j.contains(key) || j.at(key).is_null()) {
            if (required) throw SchemaViolation(std::string("missing '") + key + "'");
            return std::nullopt;
        }
        if (!j.at(key).is_string()) throw SchemaViolation(std::string("'") + key + "' must be a string");
        return j.at(key).get<std::string>();
    };
    e.id = str("id", false).value_or("");
    e.direction = str("direction", false).value_or("inbound") == "outbound" ? Direction::Outbound
                                                                           : Direction::Inbound;
    e.user_phone = *str("user_phone", true);
    if (j.contains("ts")) {
        if (!j.at("ts").is_number_integer()) throw SchemaViolation("'ts' must be an integer");
        e.ts = j.at("ts").get<std::int64_t>();
    }
    const auto kind = parse_kind(*str("kind", true));
    if (!kind) throw SchemaViolation("unknown kind '" + j.at("kind").get<std::string>() + "'");
    e.kind = *kind;
    e.body = str("body", false).value_or("");
    e.buttons.clear();
    if (j.contains("buttons") && !j.at("buttons").is_null()) {
        if (!j.at("buttons").is_array()) throw SchemaViolation("'buttons' must be an array");
        for (const auto& b : j.at("buttons")) {
            if (!b.is_string()) throw SchemaViolation("button labels must be strings");
            e.buttons.push_back(b.get<std::string>());
        }
    }
    e.media_id = str("media_id", false);
    e.reply_to = str("reply_to", false);
    if (e.kind == EnvelopeKind::Audio && !e.media_id) {
        throw SchemaViolation("audio envelope needs a media_id");
    }
    if (e.kind == EnvelopeKind::Button && e.body.empty()) {
        throw SchemaViolation("button envelope needs the pressed label as body");
    }
}

}  // namespace vitalink::gateway
