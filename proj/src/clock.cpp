#include "vitalink/clock.hpp"

#include <cstdio>

namespace vitalink {

std::string format_utc(std::int64_t unix_seconds) {
    using namespace std::chrono;
    const sys_seconds tp{seconds{unix_seconds}};
    const auto day = floor<days>(tp);
    const year_month_day ymd{day};
    const hh_mm_ss hms{tp - day};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", int(ymd.year()),
                  unsigned(ymd.month()), unsigned(ymd.day()), int(hms.hours().count()),
                  int(hms.minutes().count()), int(hms.seconds().count()));
    return buf;
}

}  // namespace vitalink
