#include "vitalink/agent_tools/cron.hpp"

#include <charconv>
#include <chrono>
#include <vector>

#include "vitalink/error.hpp"

namespace vitalink::agent_tools {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

int number(std::string_view s, std::string_view expr) {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || p != s.data() + s.size()) {
        throw InvalidCron("'" + std::string(expr) + "': bad number '" + std::string(s) + "'");
    }
    return v;
}

// Sets bits lo..hi of `field` per the expression; returns true if it starts with '*'.
template <std::size_t N>
bool parse_field(std::string_view text, int lo, int hi, std::bitset<N>& field,
                 std::string_view expr) {
    for (auto part : split(text, ',')) {
        int step = 1;
        if (const auto slash = part.find('/'); slash != std::string_view::npos) {
            step = number(part.substr(slash + 1), expr);
            if (step < 1) throw InvalidCron("'" + std::string(expr) + "': step must be >= 1");
            part = part.substr(0, slash);
        }
        int a = lo, b = hi;
        if (part != "*") {
            if (const auto dash = part.find('-'); dash != std::string_view::npos) {
                a = number(part.substr(0, dash), expr);
                b = number(part.substr(dash + 1), expr);
            } else {
                a = b = number(part, expr);
                if (step != 1) b = hi;  // "a/n" runs from a to the end
            }
        }
        if (a < lo || b > hi || a > b) {
            throw InvalidCron("'" + std::string(expr) + "': value out of range in '" +
                              std::string(text) + "'");
        }
        for (int v = a; v <= b; v += step) field.set(static_cast<std::size_t>(v));
    }
    return text.starts_with('*');
}

constexpr unsigned kMaxDays[13] = {0, 31, 29, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};

}  // namespace

CronExpr CronExpr::parse(std::string_view text) {
    CronExpr c;
    c.text_ = std::string(text);
    std::vector<std::string_view> fields;
    for (auto f : split(text, ' ')) {
        if (!f.empty()) fields.push_back(f);
    }
    if (fields.size() != 5) {
        throw InvalidCron("'" + std::string(text) + "': expected 5 fields, got " +
                          std::to_string(fields.size()));
    }
    parse_field(fields[0], 0, 59, c.minutes_, text);
    parse_field(fields[1], 0, 23, c.hours_, text);
    c.dom_any_ = parse_field(fields[2], 1, 31, c.dom_, text);
    parse_field(fields[3], 1, 12, c.months_, text);
    std::bitset<8> dow;
    c.dow_any_ = parse_field(fields[4], 0, 7, dow, text);
    for (int d = 0; d < 7; ++d) c.dow_[d] = dow[d];
    if (dow[7]) c.dow_[0] = true;

    // Reject expressions like "0 0 31 2 *" that name only impossible dates.
    if (!c.dom_any_ && !c.dow_any_) return c;
    if (c.dom_any_) return c;
    for (unsigned m = 1; m <= 12; ++m) {
        if (!c.months_[m]) continue;
        for (unsigned d = 1; d <= kMaxDays[m]; ++d) {
            if (c.dom_[d]) return c;
        }
    }
    throw InvalidCron("'" + std::string(text) + "' never fires");
}

bool CronExpr::day_matches(int dom, unsigned month, unsigned dow) const {
    if (!months_[month]) return false;
    const bool dom_ok = dom_[static_cast<std::size_t>(dom)];
    const bool dow_ok = dow_[dow];
    if (!dom_any_ && !dow_any_) return dom_ok || dow_ok;
    return dom_ok && dow_ok;
}

bool CronExpr::matches(std::int64_t t) const {
    using namespace std::chrono;
    const sys_seconds tp{seconds{t}};
    const auto day = floor<days>(tp);
    const year_month_day ymd{day};
    const hh_mm_ss hms{tp - day};
    return hms.seconds().count() == 0 && minutes_[hms.minutes().count()] &&
           hours_[hms.hours().count()] &&
           day_matches(int(unsigned(ymd.day())), unsigned(ymd.month()),
                       weekday{day}.c_encoding());
}

std::int64_t CronExpr::next_after(std::int64_t t) const {
    using namespace std::chrono;
    std::int64_t start = (t >= 0 ? t / 60 : (t - 59) / 60) * 60 + 60;
    sys_days day = floor<days>(sys_seconds{seconds{start}});
    int from_minute = static_cast<int>((start - sys_seconds{day}.time_since_epoch().count()) / 60);
    // Eight years always contain every (month, day, weekday) combination.
    for (int i = 0; i < 366 * 8; ++i, day += days{1}, from_minute = 0) {
        const year_month_day ymd{day};
        if (!day_matches(int(unsigned(ymd.day())), unsigned(ymd.month()),
                         weekday{day}.c_encoding())) {
            continue;
        }
        for (int m = from_minute; m < 24 * 60; ++m) {
            if (hours_[m / 60] && minutes_[m % 60]) {
                return sys_seconds{day}.time_since_epoch().count() + m * 60;
            }
        }
    }
    throw InvalidCron("'" + text_ + "' never fires");
}

}  // namespace vitalink::agent_tools
