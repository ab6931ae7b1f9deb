#include "vitalink/wire/burst.hpp"

#include "vitalink/error.hpp"

namespace vitalink::wire {

SensorBurst SensorBurst::zeroed(std::uint32_t ts, std::string device_id) {
    SensorBurst b;
    b.ts = ts;
    b.accel_x.assign(kAccelSamples, 0);
    b.accel_y.assign(kAccelSamples, 0);
    b.accel_z.assign(kAccelSamples, 0);
    b.ir.assign(kPpgSamples, 0);
    b.red.assign(kPpgSamples, 0);
    b.temp_wrist.assign(kTempSamples, 0);
    b.temp_ambient.assign(kTempSamples, 0);
    b.device_id = std::move(device_id);
    return b;
}

namespace {

template <typename T>
void check(const std::vector<T>& channel, std::size_t expected, const char* name) {
    if (channel.size() != expected) {
        throw LengthMismatch(std::string(name) + " has " + std::to_string(channel.size()) +
                             " samples, expected " + std::to_string(expected));
    }
}

}  // namespace

void validate(const SensorBurst& burst) {
    check(burst.accel_x, kAccelSamples, "accel_x");
    check(burst.accel_y, kAccelSamples, "accel_y");
    check(burst.accel_z, kAccelSamples, "accel_z");
    check(burst.ir, kPpgSamples, "ir");
    check(burst.red, kPpgSamples, "red");
    check(burst.temp_wrist, kTempSamples, "temp_wrist");
    check(burst.temp_ambient, kTempSamples, "temp_ambient");
}

std::size_t sample_count() {
    return 3 * kAccelSamples + 2 * kPpgSamples + 2 * kTempSamples;
}

}  // namespace vitalink::wire
