#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "vitalink/wire/burst.hpp"

namespace vitalink::dsp {

enum class ActivityLabel { Sit, Walk, Run };

std::string_view to_string(ActivityLabel label);
std::optional<ActivityLabel> parse_activity(std::string_view text);

/// Thresholds on the variance of |a| in g^2.
struct ActivityThresholds {
    double sit_walk_g2 = 0.01;
    double walk_run_g2 = 0.35;
    double counts_per_g = 256.0;  // ADXL345 full resolution
};

/// Population variance of the acceleration magnitude. Axes are in g and must
/// have equal, non-zero length.
double magnitude_variance(std::span<const double> x, std::span<const double> y,
                          std::span<const double> z);

/// Deterministic stand-in for a learned activity model: sit below the first
/// threshold, run at or above the second, walk in between.
ActivityLabel classify_activity_baseline(std::span<const double> x, std::span<const double> y,
                                         std::span<const double> z,
                                         const ActivityThresholds& thresholds = {});

ActivityLabel classify_activity_baseline(const wire::SensorBurst& burst,
                                         const ActivityThresholds& thresholds = {});

}  // namespace vitalink::dsp
