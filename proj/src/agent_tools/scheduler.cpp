#include "vitalink/agent_tools/scheduler.hpp"

#include <algorithm>
#include <array>

#include <openssl/rand.h>

#include "vitalink/agent_tools/cron.hpp"
#include "vitalink/error.hpp"

namespace vitalink::agent_tools {

std::string random_hex_id() {
    std::array<unsigned char, 16> bytes{};
    if (RAND_bytes(bytes.data(), static_cast<int>(bytes.size())) != 1) {
        throw StorageFailure("system random source unavailable");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    out.reserve(32);
    for (unsigned char b : bytes) {
        out += kHex[b >> 4];
        out += kHex[b & 0xF];
    }
    return out;
}

Scheduler::Scheduler(orchestrator::Store& store, const Clock& clock, Handler handler)
    : store_(store), clock_(clock), handler_(std::move(handler)) {}

Scheduler::~Scheduler() { stop(); }

std::string Scheduler::schedule(ScheduledTask task) {
    const auto cron = CronExpr::parse(task.cron_expr);
    if (task.id.empty()) task.id = random_hex_id();
    task.next_fire_ts = cron.next_after(clock_.now());
    std::lock_guard lock(tick_mutex_);
    store_.put_task(task);
    return task.id;
}

bool Scheduler::cancel(const std::string& id) {
    std::lock_guard lock(tick_mutex_);
    return store_.delete_task(id);
}

std::size_t Scheduler::tick() {
    std::lock_guard lock(tick_mutex_);
    const std::int64_t now = clock_.now();
    std::size_t fired = 0;
    while (true) {
        auto tasks = store_.tasks();
        auto due = std::min_element(tasks.begin(), tasks.end(), [](const auto& a, const auto& b) {
            return std::pair(a.next_fire_ts, a.id) < std::pair(b.next_fire_ts, b.id);
        });
        if (due == tasks.end() || due->next_fire_ts > now) return fired;
        ScheduledTask task = *due;
        const std::int64_t instant = task.next_fire_ts;
        handler_(task, instant);
        task.last_fire_ts = instant;
        task.next_fire_ts = CronExpr::parse(task.cron_expr).next_after(instant);
        store_.put_task(task);
        ++fired;
    }
}

void Scheduler::start(std::chrono::milliseconds period) {
    stop();
    {
        std::lock_guard lock(loop_mutex_);
        stopping_ = false;
    }
    loop_ = std::thread([this, period] {
        std::unique_lock lock(loop_mutex_);
        while (!loop_cv_.wait_for(lock, period, [this] { return stopping_; })) {
            lock.unlock();
            try {
                tick();
            } catch (const Error&) {
                // A failing handler must not stop the loop; it retries next period.
            }
            lock.lock();
        }
    });
}

void Scheduler::stop() {
    {
        std::lock_guard lock(loop_mutex_);
        stopping_ = true;
    }
    loop_cv_.notify_all();
    if (loop_.joinable()) loop_.join();
}

}  // namespace vitalink::agent_tools
