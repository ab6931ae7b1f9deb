#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <string>

namespace vitalink {

/// Source of unix time in seconds. Injected wherever behaviour depends on the
/// wall clock so tests can step time explicitly.
class Clock {
public:
    virtual ~Clock() = default;
    virtual std::int64_t now() const = 0;
};

class SystemClock final : public Clock {
public:
    std::int64_t now() const override {
        return std::chrono::duration_cast<std::chrono::seconds>(
                   std::chrono::system_clock::now().time_since_epoch())
            .count();
    }
};

class ManualClock final : public Clock {
public:
    explicit ManualClock(std::int64_t start = 0) : t_(start) {}
    std::int64_t now() const override { return t_.load(); }
    void set(std::int64_t t) { t_.store(t); }
    void advance(std::int64_t seconds) { t_.fetch_add(seconds); }

private:
    std::atomic<std::int64_t> t_;
};

/// "YYYY-MM-DDTHH:MM:SSZ".
std::string format_utc(std::int64_t unix_seconds);

}  // namespace vitalink
