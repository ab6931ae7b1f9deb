#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <functional>
#include <mutex>
#include <string>
#include <thread>

#include "vitalink/clock.hpp"
#include "vitalink/orchestrator/store.hpp"

namespace vitalink::agent_tools {

using orchestrator::ScheduledTask;
using orchestrator::TaskKind;

/// In-process cron scheduler. Tasks live in the store together with their
/// next fire instant, so a new Scheduler over the same store resumes where
/// the previous one stopped.
///
/// `tick()` fires every instant that is due at the clock's current time, in
/// instant order, each exactly once: a task that was due several times while
/// nothing ticked fires once per missed instant. The task's new next_fire_ts
/// is persisted after the handler returns, so a crash inside a handler can
/// repeat that one instant on restart but never skip it.
class Scheduler {
public:
    using Handler = std::function<void(const ScheduledTask& task, std::int64_t instant)>;

    Scheduler(orchestrator::Store& store, const Clock& clock, Handler handler);
    ~Scheduler();

    Scheduler(const Scheduler&) = delete;
    Scheduler& operator=(const Scheduler&) = delete;

    /// Validates the cron expression, assigns an id when empty, computes the
    /// first fire after now and persists. Throws InvalidCron.
    std::string schedule(ScheduledTask task);
    bool cancel(const std::string& id);

    /// Number of fires performed.
    std::size_t tick();

    /// Background loop calling tick() every `period` until stop().
    void start(std::chrono::milliseconds period = std::chrono::milliseconds(1000));
    void stop();

private:
    orchestrator::Store& store_;
    const Clock& clock_;
    Handler handler_;
    std::mutex tick_mutex_;
    std::mutex loop_mutex_;
    std::condition_variable loop_cv_;
    bool stopping_ = false;
    std::thread loop_;
};

/// 32 lowercase hex characters from the system CSPRNG.
std::string random_hex_id();

}  // namespace vitalink::agent_tools
