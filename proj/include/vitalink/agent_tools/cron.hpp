#pragma once

#include <bitset>
#include <cstdint>
#include <string>
#include <string_view>

namespace vitalink::agent_tools {

/// Five-field cron expression (minute hour day-of-month month day-of-week),
/// evaluated in UTC. Each field accepts `*`, numbers, ranges `a-b`, steps
/// `*/n` and `a-b/n`, and comma lists. Day-of-week 0 and 7 are Sunday. When
/// both day fields are restricted a day matches if either does.
class CronExpr {
public:
    /// Throws InvalidCron on syntax errors, out-of-range values, or an
    /// expression that can never fire.
    static CronExpr parse(std::string_view text);

    /// Smallest minute-aligned instant strictly after `unix_seconds` that
    /// matches.
    std::int64_t next_after(std::int64_t unix_seconds) const;

    bool matches(std::int64_t unix_seconds) const;
    const std::string& text() const { return text_; }

private:
    bool day_matches(int dom, unsigned month, unsigned dow) const;

    std::string text_;
    std::bitset<60> minutes_;
    std::bitset<24> hours_;
    std::bitset<32> dom_;     // 1..31
    std::bitset<13> months_;  // 1..12
    std::bitset<7> dow_;      // 0..6, Sunday = 0
    bool dom_any_ = true;
    bool dow_any_ = true;
};

}  // namespace vitalink::agent_tools
