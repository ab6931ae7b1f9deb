#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace vitalink::wire {

// Sample counts of one 4 s acquisition window.
inline constexpr std::size_t kAccelSamples = 136;  // per axis, 34 Hz
inline constexpr std::size_t kPpgSamples = 124;    // per channel, 31 Hz
inline constexpr std::size_t kTempSamples = 4;     // per sensor, 1 Hz

inline constexpr double kAccelRateHz = 34.0;
inline constexpr double kPpgRateHz = 31.0;
inline constexpr double kTempRateHz = 1.0;
inline constexpr double kWindowSeconds = 4.0;

/// One multi-modal acquisition window as produced by the band.
///
/// Accelerometer values are raw signed ADC counts, PPG values raw unsigned
/// counts and temperatures hundredths of a degree Celsius. The device id is
/// not part of the packet; it is attached by the link layer that paired with
/// the band.
struct SensorBurst {
    std::uint32_t ts = 0;  // unix seconds at the start of Collect
    std::vector<std::int16_t> accel_x;
    std::vector<std::int16_t> accel_y;
    std::vector<std::int16_t> accel_z;
    std::vector<std::uint16_t> ir;
    std::vector<std::uint16_t> red;
    std::vector<std::uint16_t> temp_wrist;
    std::vector<std::uint16_t> temp_ambient;
    std::string device_id;

    bool operator==(const SensorBurst&) const = default;

    /// A burst with every channel sized correctly and zero-filled.
    static SensorBurst zeroed(std::uint32_t ts = 0, std::string device_id = {});
};

/// Throws LengthMismatch naming the first channel with the wrong cardinality.
void validate(const SensorBurst& burst);

/// Total number of samples carried in one burst (all channels).
std::size_t sample_count();

}  // namespace vitalink::wire
