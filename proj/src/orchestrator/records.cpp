#include "vitalink/orchestrator/records.hpp"

#include <cctype>

#include "vitalink/error.hpp"

namespace vitalink::orchestrator {

using nlohmann::json;

void Thresholds::validate() const {
    if (!(hr_low < hr_high)) throw ConfigError("hr_low must be below hr_high");
    if (hr_sustain < 1) throw ConfigError("hr_sustain must be >= 1");
}

bool is_e164(std::string_view phone) {
    if (phone.size() < 9 || phone.size() > 16 || phone[0] != '+') return false;
    if (phone[1] == '0') return false;
    for (std::size_t i = 1; i < phone.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(phone[i]))) return false;
    }
    return true;
}

std::string_view to_string(TaskKind kind) {
    switch (kind) {
        case TaskKind::DailySummary: return "daily_summary";
        case TaskKind::MedicationReminder: return "medication_reminder";
        case TaskKind::NoDataCheck: return "no_data_check";
        case TaskKind::Custom: return "custom";
    }
    return "custom";
}

std::optional<TaskKind> parse_task_kind(std::string_view text) {
    if (text == "daily_summary") return TaskKind::DailySummary;
    if (text == "medication_reminder") return TaskKind::MedicationReminder;
    if (text == "no_data_check") return TaskKind::NoDataCheck;
    if (text == "custom") return TaskKind::Custom;
    return std::nullopt;
}

namespace {

template <typename T>
json opt(const std::optional<T>& v) {
    return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> get_opt(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

}  // namespace

void to_json(json& j, const Thresholds& v) {
    j = json{{"hr_low", v.hr_low},       {"hr_high", v.hr_high},     {"hr_sustain", v.hr_sustain},
             {"spo2_low", v.spo2_low},   {"temp_high", v.temp_high}};
}

void from_json(const json& j, Thresholds& v) {
    const Thresholds d;
    v.hr_low = j.value("hr_low", d.hr_low);
    v.hr_high = j.value("hr_high", d.hr_high);
    v.hr_sustain = j.value("hr_sustain", d.hr_sustain);
    v.spo2_low = j.value("spo2_low", d.spo2_low);
    v.temp_high = j.value("temp_high", d.temp_high);
}

void to_json(json& j, const Preferences& v) {
    j = json{{"summary_cron", v.summary_cron},
             {"escalation_contacts", v.escalation_contacts},
             {"uploads_paused", v.uploads_paused}};
}

void from_json(const json& j, Preferences& v) {
    const Preferences d;
    v.summary_cron = j.value("summary_cron", d.summary_cron);
    v.escalation_contacts = j.value("escalation_contacts", d.escalation_contacts);
    v.uploads_paused = j.value("uploads_paused", d.uploads_paused);
}

void to_json(json& j, const UserProfile& v) {
    j = json{{"phone", v.phone},
             {"passcode_hash", v.passcode_hash},
             {"passcode_salt", v.passcode_salt},
             {"name", opt(v.name)},
             {"age", opt(v.age)},
             {"bmi", opt(v.bmi)},
             {"medical_background", opt(v.medical_background)},
             {"demographic", opt(v.demographic)},
             {"device_id", v.device_id},
             {"thresholds", v.thresholds},
             {"preferences", v.preferences},
             {"welcomed", v.welcomed},
             {"profile_complete", v.profile_complete},
             {"created_at", v.created_at}};
}

void from_json(const json& j, UserProfile& v) {
    v.phone = j.at("phone").get<std::string>();
    v.passcode_hash = j.value("passcode_hash", "");
    v.passcode_salt = j.value("passcode_salt", "");
    v.name = get_opt<std::string>(j, "name");
    v.age = get_opt<int>(j, "age");
    v.bmi = get_opt<double>(j, "bmi");
    v.medical_background = get_opt<std::string>(j, "medical_background");
    v.demographic = get_opt<std::string>(j, "demographic");
    v.device_id = j.value("device_id", "");
    v.thresholds = j.value("thresholds", Thresholds{});
    v.preferences = j.value("preferences", Preferences{});
    v.welcomed = j.value("welcomed", false);
    v.profile_complete = j.value("profile_complete", false);
    v.created_at = j.value("created_at", std::int64_t{0});
}

void to_json(json& j, const StoredVital& v) {
    j = json{{"seq", v.seq},
             {"phone", v.phone},
             {"estimate", v.estimate},
             {"pending_evaluation", v.pending_evaluation},
             {"anomaly_flag", v.anomaly_flag}};
}

void from_json(const json& j, StoredVital& v) {
    v.seq = j.at("seq").get<std::int64_t>();
    v.phone = j.at("phone").get<std::string>();
    v.estimate = j.at("estimate").get<interpreter::VitalEstimate>();
    v.pending_evaluation = j.value("pending_evaluation", false);
    v.anomaly_flag = j.value("anomaly_flag", false);
}

void to_json(json& j, const MemoryEvent& v) {
    j = json{{"seq", v.seq},
             {"phone", v.phone},
             {"ts", v.ts},
             {"kind", v.kind == MemoryKind::UrgentAlert ? "urgent_alert" : "note"},
             {"summary", v.summary},
             {"linked_vitals", v.linked_vitals}};
}

void from_json(const json& j, MemoryEvent& v) {
    v.seq = j.at("seq").get<std::int64_t>();
    v.phone = j.at("phone").get<std::string>();
    v.ts = j.at("ts").get<std::int64_t>();
    v.kind = j.at("kind").get<std::string>() == "urgent_alert" ? MemoryKind::UrgentAlert
                                                                : MemoryKind::Note;
    v.summary = j.value("summary", "");
    v.linked_vitals = j.value("linked_vitals", json::array());
}

void to_json(json& j, const ScheduledTask& v) {
    j = json{{"id", v.id},
             {"user", v.user},
             {"kind", std::string(to_string(v.kind))},
             {"cron_expr", v.cron_expr},
             {"payload", v.payload},
             {"next_fire_ts", v.next_fire_ts},
             {"last_fire_ts", v.last_fire_ts}};
}

void from_json(const json& j, ScheduledTask& v) {
    v.id = j.at("id").get<std::string>();
    v.user = j.value("user", "");
    v.kind = parse_task_kind(j.value("kind", "custom")).value_or(TaskKind::Custom);
    v.cron_expr = j.at("cron_expr").get<std::string>();
    v.payload = j.value("payload", "");
    v.next_fire_ts = j.value("next_fire_ts", std::int64_t{0});
    v.last_fire_ts = j.value("last_fire_ts", std::int64_t{0});
}

void to_json(json& j, const MessageRecord& v) {
    j = json{{"seq", v.seq}, {"phone", v.phone}, {"envelope", v.envelope}};
}

void from_json(const json& j, MessageRecord& v) {
    v.seq = j.at("seq").get<std::int64_t>();
    v.phone = j.at("phone").get<std::string>();
    v.envelope = j.at("envelope");
}

void to_json(json& j, const StoredCost& v) {
    j = json{{"seq", v.seq},   {"phone", v.phone},
             {"ts", v.ts},     {"tier", v.tier},
             {"tokens_per_model", v.tokens_per_model}, {"total_usd", v.total_usd}};
}

void from_json(const json& j, StoredCost& v) {
    v.seq = j.at("seq").get<std::int64_t>();
    v.phone = j.value("phone", "");
    v.ts = j.value("ts", std::int64_t{0});
    v.tier = j.value("tier", "");
    v.tokens_per_model = j.value("tokens_per_model", json::object());
    v.total_usd = j.value("total_usd", 0.0);
}

void to_json(json& j, const AuditRecord& v) {
    j = json{{"seq", v.seq}, {"ts", v.ts}, {"phone", v.phone}, {"event", v.event}, {"details", v.details}};
}

void from_json(const json& j, AuditRecord& v) {
    v.seq = j.at("seq").get<std::int64_t>();
    v.ts = j.value("ts", std::int64_t{0});
    v.phone = j.value("phone", "");
    v.event = j.at("event").get<std::string>();
    v.details = j.value("details", json::object());
}

}  // namespace vitalink::orchestrator
