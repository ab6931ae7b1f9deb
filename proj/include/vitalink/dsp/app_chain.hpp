#pragma once

#include <cstddef>
#include <vector>

#include "vitalink/dsp/filter.hpp"
#include "vitalink/wire/burst.hpp"

namespace vitalink::dsp {

/// Companion-app preprocessing. A filter whose cutoff is not representable at
/// its channel's rate (the 3 Hz temperature low-pass at 1 Hz) falls back to a
/// centred moving average of `temp_fallback_window` samples.
struct AppChainConfig {
    FilterSpec temperature = FilterSpec::low_pass(3.0, wire::kTempRateHz);
    FilterSpec ppg = FilterSpec::band_pass(0.5, 2.5, wire::kPpgRateHz);
    FilterSpec accel = FilterSpec::high_pass(0.2, wire::kAccelRateHz);
    std::size_t temp_fallback_window = 3;
};

struct FilteredBurst {
    std::vector<double> ir, red;
    std::vector<double> accel_x, accel_y, accel_z;  // counts, gravity removed
    std::vector<double> temp_wrist, temp_ambient;   // degrees C
    bool temperature_fallback = false;
};

FilteredBurst app_filter_chain(const wire::SensorBurst& burst, const AppChainConfig& config = {});

/// Centred moving average with the window shrinking at the edges.
std::vector<double> moving_average(const std::vector<double>& x, std::size_t window);

}  // namespace vitalink::dsp
