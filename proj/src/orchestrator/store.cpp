#include "vitalink/orchestrator/store.hpp"

#include <algorithm>
#include <fstream>
#include <mutex>

#include "vitalink/error.hpp"

namespace vitalink::orchestrator {

namespace fs = std::filesystem;
using nlohmann::json;

json Store::export_user(const std::string& phone) const {
    const auto u = user(phone);
    if (!u) throw UnknownUser(phone);
    json out;
    json profile = *u;
    profile.erase("passcode_hash");
    profile.erase("passcode_salt");
    out["profile"] = profile;
    out["vitals"] = vitals(phone);
    out["messages"] = messages(phone);
    out["memory"] = memory(phone);
    json tasks = json::array();
    for (const auto& t : this->tasks()) {
        if (t.user == phone) tasks.push_back(t);
    }
    out["tasks"] = tasks;
    json costs = json::array();
    for (const auto& c : this->costs()) {
        if (c.phone == phone) costs.push_back(c);
    }
    out["costs"] = costs;
    return out;
}

JsonlStore::JsonlStore(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(*dir_, ec);
    if (ec) throw StorageFailure("cannot create " + dir_->string() + ": " + ec.message());
    load();
}

namespace {

template <typename T>
void read_table(const fs::path& file, std::int64_t& max_seq, std::vector<T>& out) {
    std::ifstream in(file);
    if (!in) return;
    std::string line;
    std::size_t lineno = 0;
    std::streamoff line_start = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::streamoff next = in.eof() ? -1 : static_cast<std::streamoff>(in.tellg());
        if (line.empty()) {
            line_start = next;
            continue;
        }
        const json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) {
            // A torn final line from an interrupted append is cut off so the
            // next append starts on a fresh line; anything earlier is corruption.
            if (in.peek() == std::ifstream::traits_type::eof()) {
                in.close();
                std::error_code ec;
                fs::resize_file(file, static_cast<std::uintmax_t>(line_start), ec);
                if (ec) throw StorageFailure("cannot truncate " + file.string() + ": " + ec.message());
                break;
            }
            throw StorageFailure(file.string() + ":" + std::to_string(lineno) + " is not JSON");
        }
        line_start = next;
        T row = j.get<T>();
        if constexpr (requires { row.seq; }) max_seq = std::max(max_seq, row.seq);
        out.push_back(std::move(row));
    }
}

}  // namespace

void JsonlStore::load() {
    std::int64_t max_seq = 0;
    std::vector<UserProfile> users;
    read_table(*dir_ / "users.jsonl", max_seq, users);
    for (auto& u : users) users_[u.phone] = std::move(u);
    read_table(*dir_ / "vitals.jsonl", max_seq, vitals_);
    read_table(*dir_ / "messages.jsonl", max_seq, messages_);
    read_table(*dir_ / "memory.jsonl", max_seq, memory_);
    std::vector<ScheduledTask> tasks;
    read_table(*dir_ / "tasks.jsonl", max_seq, tasks);
    for (auto& t : tasks) tasks_[t.id] = std::move(t);
    read_table(*dir_ / "costs.jsonl", max_seq, costs_);
    read_table(*dir_ / "audit.jsonl", max_seq, audit_);
    next_seq_ = max_seq + 1;
}

void JsonlStore::append_line(const char* table, const json& row) {
    if (!dir_) return;
    const auto file = *dir_ / (std::string(table) + ".jsonl");
    std::ofstream out(file, std::ios::app);
    out << row.dump() << '\n';
    out.flush();
    if (!out) throw StorageFailure("cannot append to " + file.string());
}

template <typename Rows>
void JsonlStore::rewrite(const char* table, const Rows& rows) {
    if (!dir_) return;
    const auto file = *dir_ / (std::string(table) + ".jsonl");
    const auto tmp = fs::path(file.string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::trunc);
        for (const auto& row : rows) {
            if constexpr (requires { row.second; }) {
                out << json(row.second).dump() << '\n';
            } else {
                out << json(row).dump() << '\n';
            }
        }
        out.flush();
        if (!out) throw StorageFailure("cannot write " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, file, ec);
    if (ec) throw StorageFailure("cannot replace " + file.string() + ": " + ec.message());
}

void JsonlStore::put_user(const UserProfile& user) {
    std::unique_lock lock(mutex_);
    users_[user.phone] = user;
    rewrite("users", users_);
}

std::optional<UserProfile> JsonlStore::user(const std::string& phone) const {
    std::shared_lock lock(mutex_);
    auto it = users_.find(phone);
    if (it == users_.end()) return std::nullopt;
    return it->second;
}

std::optional<UserProfile> JsonlStore::user_by_device(const std::string& device_id) const {
    std::shared_lock lock(mutex_);
    for (const auto& [_, u] : users_) {
        if (!device_id.empty() && u.device_id == device_id) return u;
    }
    return std::nullopt;
}

std::vector<UserProfile> JsonlStore::users() const {
    std::shared_lock lock(mutex_);
    std::vector<UserProfile> out;
    for (const auto& [_, u] : users_) out.push_back(u);
    return out;
}

bool JsonlStore::delete_user(const std::string& phone) {
    std::unique_lock lock(mutex_);
    if (users_.erase(phone) == 0) return false;
    auto owned = [&](const auto& row) { return row.phone == phone; };
    std::erase_if(vitals_, owned);
    std::erase_if(messages_, owned);
    std::erase_if(memory_, owned);
    std::erase_if(costs_, owned);
    std::erase_if(tasks_, [&](const auto& kv) { return kv.second.user == phone; });
    rewrite("users", users_);
    rewrite("vitals", vitals_);
    rewrite("messages", messages_);
    rewrite("memory", memory_);
    rewrite("costs", costs_);
    rewrite("tasks", tasks_);
    return true;
}

StoredVital JsonlStore::append_vital(const std::string& phone,
                                     const interpreter::VitalEstimate& estimate,
                                     bool pending_evaluation, bool anomaly_flag) {
    std::unique_lock lock(mutex_);
    StoredVital v{next_seq_++, phone, estimate, pending_evaluation, anomaly_flag};
    append_line("vitals", v);
    vitals_.push_back(v);
    return v;
}

std::vector<StoredVital> JsonlStore::vitals(const std::string& phone, std::int64_t from_ts,
                                            std::int64_t to_ts) const {
    std::shared_lock lock(mutex_);
    std::vector<StoredVital> out;
    for (const auto& v : vitals_) {
        const std::int64_t ts = v.estimate.burst_ts;
        if (v.phone == phone && ts >= from_ts && ts <= to_ts) out.push_back(v);
    }
    std::stable_sort(out.begin(), out.end(), [](const StoredVital& a, const StoredVital& b) {
        return std::pair(a.estimate.burst_ts, a.seq) < std::pair(b.estimate.burst_ts, b.seq);
    });
    return out;
}

bool JsonlStore::has_vital(const std::string& phone, std::uint32_t burst_ts) const {
    std::shared_lock lock(mutex_);
    return std::any_of(vitals_.begin(), vitals_.end(), [&](const StoredVital& v) {
        return v.phone == phone && v.estimate.burst_ts == burst_ts;
    });
}

std::vector<StoredVital> JsonlStore::pending_vitals() const {
    std::shared_lock lock(mutex_);
    std::vector<StoredVital> out;
    for (const auto& v : vitals_) {
        if (v.pending_evaluation) out.push_back(v);
    }
    return out;
}

void JsonlStore::mark_evaluated(std::int64_t seq) {
    std::unique_lock lock(mutex_);
    for (auto& v : vitals_) {
        if (v.seq == seq && v.pending_evaluation) {
            v.pending_evaluation = false;
            rewrite("vitals", vitals_);
            return;
        }
    }
}

MessageRecord JsonlStore::append_message(const std::string& phone, const json& envelope) {
    std::unique_lock lock(mutex_);
    MessageRecord m{next_seq_++, phone, envelope};
    append_line("messages", m);
    messages_.push_back(m);
    return m;
}

std::vector<MessageRecord> JsonlStore::messages(const std::string& phone) const {
    std::shared_lock lock(mutex_);
    std::vector<MessageRecord> out;
    for (const auto& m : messages_) {
        if (m.phone == phone) out.push_back(m);
    }
    return out;
}

MemoryEvent JsonlStore::append_memory(MemoryEvent event) {
    std::unique_lock lock(mutex_);
    event.seq = next_seq_++;
    append_line("memory", event);
    memory_.push_back(event);
    return event;
}

std::vector<MemoryEvent> JsonlStore::memory(const std::string& phone) const {
    std::shared_lock lock(mutex_);
    std::vector<MemoryEvent> out;
    for (const auto& m : memory_) {
        if (m.phone == phone) out.push_back(m);
    }
    return out;
}

void JsonlStore::put_task(const ScheduledTask& task) {
    std::unique_lock lock(mutex_);
    tasks_[task.id] = task;
    rewrite("tasks", tasks_);
}

std::vector<ScheduledTask> JsonlStore::tasks() const {
    std::shared_lock lock(mutex_);
    std::vector<ScheduledTask> out;
    for (const auto& [_, t] : tasks_) out.push_back(t);
    return out;
}

bool JsonlStore::delete_task(const std::string& id) {
    std::unique_lock lock(mutex_);
    if (tasks_.erase(id) == 0) return false;
    rewrite("tasks", tasks_);
    return true;
}

StoredCost JsonlStore::append_cost(StoredCost cost) {
    std::unique_lock lock(mutex_);
    cost.seq = next_seq_++;
    append_line("costs", cost);
    costs_.push_back(cost);
    return cost;
}

std::vector<StoredCost> JsonlStore::costs() const {
    std::shared_lock lock(mutex_);
    return costs_;
}

AuditRecord JsonlStore::append_audit(AuditRecord record) {
    std::unique_lock lock(mutex_);
    record.seq = next_seq_++;
    append_line("audit", record);
    audit_.push_back(record);
    return record;
}

std::vector<AuditRecord> JsonlStore::audit() const {
    std::shared_lock lock(mutex_);
    return audit_;
}

}  // namespace vitalink::orchestrator
