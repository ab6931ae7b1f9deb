#pragma once

#include <cstdint>
#include <filesystem>
#include <limits>
#include <map>
#include <optional>
#include <shared_mutex>
#include <string>
#include <vector>

#include "vitalink/orchestrator/records.hpp"

namespace vitalink::orchestrator {

/// Persistence boundary of the system. Implementations must allow concurrent
/// readers and serialize writers. Sequence numbers are unique and increasing
/// across all tables of one store.
class Store {
public:
    virtual ~Store() = default;

    // users
    virtual void put_user(const UserProfile& user) = 0;
    virtual std::optional<UserProfile> user(const std::string& phone) const = 0;
    virtual std::optional<UserProfile> user_by_device(const std::string& device_id) const = 0;
    virtual std::vector<UserProfile> users() const = 0;
    /// Removes the user and every row that references them. False if unknown.
    virtual bool delete_user(const std::string& phone) = 0;

    // vitals
    virtual StoredVital append_vital(const std::string& phone,
                                     const interpreter::VitalEstimate& estimate,
                                     bool pending_evaluation, bool anomaly_flag) = 0;
    /// Ordered by (burst_ts, seq); bounds inclusive.
    virtual std::vector<StoredVital> vitals(
        const std::string& phone, std::int64_t from_ts = 0,
        std::int64_t to_ts = std::numeric_limits<std::int64_t>::max()) const = 0;
    virtual bool has_vital(const std::string& phone, std::uint32_t burst_ts) const = 0;
    virtual std::vector<StoredVital> pending_vitals() const = 0;
    virtual void mark_evaluated(std::int64_t seq) = 0;

    // messages
    virtual MessageRecord append_message(const std::string& phone, const nlohmann::json& envelope) = 0;
    virtual std::vector<MessageRecord> messages(const std::string& phone) const = 0;

    // long-term memory
    virtual MemoryEvent append_memory(MemoryEvent event) = 0;
    virtual std::vector<MemoryEvent> memory(const std::string& phone) const = 0;

    // scheduled tasks
    virtual void put_task(const ScheduledTask& task) = 0;
    virtual std::vector<ScheduledTask> tasks() const = 0;
    virtual bool delete_task(const std::string& id) = 0;

    // cost records
    virtual StoredCost append_cost(StoredCost cost) = 0;
    virtual std::vector<StoredCost> costs() const = 0;

    // audit log
    virtual AuditRecord append_audit(AuditRecord record) = 0;
    virtual std::vector<AuditRecord> audit() const = 0;

    /// Every row that belongs to `phone`, as one JSON document.
    nlohmann::json export_user(const std::string& phone) const;
};

/// Store kept in memory and, when constructed with a directory, mirrored to
/// one line-delimited JSON file per table (users, vitals, messages, memory,
/// tasks, costs, audit). Appends are single-line writes; updates and deletes
/// rewrite the table through a temporary file and rename. Throws
/// StorageFailure on I/O errors.
class JsonlStore final : public Store {
public:
    JsonlStore() = default;  // memory only
    explicit JsonlStore(std::filesystem::path dir);

    void put_user(const UserProfile& user) override;
    std::optional<UserProfile> user(const std::string& phone) const override;
    std::optional<UserProfile> user_by_device(const std::string& device_id) const override;
    std::vector<UserProfile> users() const override;
    bool delete_user(const std::string& phone) override;

    StoredVital append_vital(const std::string& phone, const interpreter::VitalEstimate& estimate,
                             bool pending_evaluation, bool anomaly_flag) override;
    std::vector<StoredVital> vitals(
        const std::string& phone, std::int64_t from_ts = 0,
        std::int64_t to_ts = std::numeric_limits<std::int64_t>::max()) const override;
    bool has_vital(const std::string& phone, std::uint32_t burst_ts) const override;
    std::vector<StoredVital> pending_vitals() const override;
    void mark_evaluated(std::int64_t seq) override;

    MessageRecord append_message(const std::string& phone, const nlohmann::json& envelope) override;
    std::vector<MessageRecord> messages(const std::string& phone) const override;

    MemoryEvent append_memory(MemoryEvent event) override;
    std::vector<MemoryEvent> memory(const std::string& phone) const override;

    void put_task(const ScheduledTask& task) override;
    std::vector<ScheduledTask> tasks() const override;
    bool delete_task(const std::string& id) override;

    StoredCost append_cost(StoredCost cost) override;
    std::vector<StoredCost> costs() const override;

    AuditRecord append_audit(AuditRecord record) override;
    std::vector<AuditRecord> audit() const override;

private:
    void load();
    void append_line(const char* table, const nlohmann::json& row);
    template <typename Rows>
    void rewrite(const char* table, const Rows& rows);

    std::optional<std::filesystem::path> dir_;
    mutable std::shared_mutex mutex_;
    std::int64_t next_seq_ = 1;
    std::map<std::string, UserProfile> users_;
    std::vector<StoredVital> vitals_;
    std::vector<MessageRecord> messages_;
    std::vector<MemoryEvent> memory_;
    std::map<std::string, ScheduledTask> tasks_;
    std::vector<StoredCost> costs_;
    std::vector<AuditRecord> audit_;
};

}  // namespace vitalink::orchestrator
