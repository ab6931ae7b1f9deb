#pragma once

#include <cstdint>
#include <string>

#include "vitalink/wire/burst.hpp"

namespace vitalink::wire {

/// Parameters of a synthetic band recording. Used by the device simulator
/// presets, the synthetic evaluation dataset, and tests.
struct SyntheticVitals {
    double hr_bpm = 72.0;
    double spo2_pct = 97.0;
    double perfusion_index = 0.02;  // AC/DC of the IR channel
    double ir_dc = 20000.0;         // counts
    double motion_amplitude_g = 0.0;
    double motion_freq_hz = 0.0;
    double temp_wrist_c = 33.0;
    double temp_ambient_c = 25.0;
    double noise_counts = 0.0;  // gaussian PPG noise std-dev
    double counts_per_g = 256.0;
    std::uint64_t seed = 1;
};

/// Ratio R that maps to `spo2_pct` on the conventional quadratic calibration,
/// taking the root inside [0.3, 1.1].
double ratio_for_spo2(double spo2_pct);

SensorBurst make_burst(const SyntheticVitals& vitals, std::uint32_t ts = 0,
                       std::string device_id = {});

/// Named presets used by the simulator CLI: "normal", "high-hr", "low-spo2",
/// "walk", "run".
SyntheticVitals preset(const std::string& name);

}  // namespace vitalink::wire
