#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vitalink/interpreter/vital_estimate.hpp"

namespace vitalink::orchestrator {

/// Per-user alert bounds. HR alerts need `hr_sustain` consecutive estimates
/// outside [hr_low, hr_high]; SpO2 and temperature alert on a single reading.
struct Thresholds {
    double hr_low = 50.0;
    double hr_high = 120.0;
    int hr_sustain = 3;
    double spo2_low = 92.0;
    double temp_high = 38.0;

    /// Throws ConfigError unless hr_low < hr_high and hr_sustain >= 1.
    void validate() const;
    bool operator==(const Thresholds&) const = default;
};

struct Preferences {
    std::string summary_cron = "0 9 * * *";
    std::vector<std::string> escalation_contacts;
    bool uploads_paused = false;
    bool operator==(const Preferences&) const = default;
};

struct UserProfile {
    std::string phone;  // E.164
    std::string passcode_hash;
    std::string passcode_salt;
    std::optional<std::string> name;
    std::optional<int> age;
    std::optional<double> bmi;
    std::optional<std::string> medical_background;
    std::optional<std::string> demographic;
    std::string device_id;
    Thresholds thresholds;
    Preferences preferences;
    bool welcomed = false;
    bool profile_complete = false;
    std::int64_t created_at = 0;

    bool operator==(const UserProfile&) const = default;
};

/// True for "+" followed by 8 to 15 digits, the first non-zero.
bool is_e164(std::string_view phone);

struct StoredVital {
    std::int64_t seq = 0;  // insertion order, unique across the store
    std::string phone;
    interpreter::VitalEstimate estimate;
    bool pending_evaluation = false;
    bool anomaly_flag = false;
};

enum class MemoryKind { UrgentAlert, Note };

struct MemoryEvent {
    std::int64_t seq = 0;
    std::string phone;
    std::int64_t ts = 0;
    MemoryKind kind = MemoryKind::Note;
    std::string summary;
    nlohmann::json linked_vitals = nlohmann::json::array();
};

enum class TaskKind { DailySummary, MedicationReminder, NoDataCheck, Custom };

std::string_view to_string(TaskKind kind);
std::optional<TaskKind> parse_task_kind(std::string_view text);

struct ScheduledTask {
    std::string id;
    std::string user;
    TaskKind kind = TaskKind::Custom;
    std::string cron_expr;
    std::string payload;
    std::int64_t next_fire_ts = 0;
    std::int64_t last_fire_ts = 0;  // 0 until the first fire

    bool operator==(const ScheduledTask&) const = default;
};

/// One stored chat message (both directions).
struct MessageRecord {
    std::int64_t seq = 0;
    std::string phone;
    nlohmann::json envelope;
};

struct StoredCost {
    std::int64_t seq = 0;
    std::string phone;
    std::int64_t ts = 0;
    std::string tier;
    nlohmann::json tokens_per_model;
    double total_usd = 0.0;
};

struct AuditRecord {
    std::int64_t seq = 0;
    std::int64_t ts = 0;
    std::string phone;
    std::string event;
    nlohmann::json details = nlohmann::json::object();
};

void to_json(nlohmann::json& j, const Thresholds& v);
void from_json(const nlohmann::json& j, Thresholds& v);
void to_json(nlohmann::json& j, const Preferences& v);
void from_json(const nlohmann::json& j, Preferences& v);
void to_json(nlohmann::json& j, const UserProfile& v);
void from_json(const nlohmann::json& j, UserProfile& v);
void to_json(nlohmann::json& j, const StoredVital& v);
void from_json(const nlohmann::json& j, StoredVital& v);
void to_json(nlohmann::json& j, const MemoryEvent& v);
void from_json(const nlohmann::json& j, MemoryEvent& v);
void to_json(nlohmann::json& j, const ScheduledTask& v);
void from_json(const nlohmann::json& j, ScheduledTask& v);
void to_json(nlohmann::json& j, const MessageRecord& v);
void from_json(const nlohmann::json& j, MessageRecord& v);
void to_json(nlohmann::json& j, const StoredCost& v);
void from_json(const nlohmann::json& j, StoredCost& v);
void to_json(nlohmann::json& j, const AuditRecord& v);
void from_json(const nlohmann::json& j, AuditRecord& v);

}  // namespace vitalink::orchestrator
