#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "vitalink/wire/burst.hpp"

namespace vitalink::dsp {

/// Knobs of the quality-gated HR/SpO2 estimator. Defaults are the shipped
/// configuration; all of them can be overridden from the service config.
struct ConventionalConfig {
    double sample_rate_hz = 31.0;
    double band_low_hz = 0.5;
    double band_high_hz = 2.5;
    int filter_order = 2;
    double dc_window_s = 1.0;           // moving-average DC estimate
    double min_peak_spacing_s = 1.0 / 3.0;
    double prominence_fraction = 0.25;  // of the window's filtered peak-to-peak
    double min_ac_counts = 1.0;         // filtered peak-to-peak below this is flat
    double min_hr_bpm = 40.0;
    double max_hr_bpm = 180.0;
    double dc_floor_counts = 1000.0;
    double min_ratio = 0.3;
    double max_ratio = 1.1;
};

struct ConventionalEstimate {
    std::optional<double> hr_bpm;
    std::optional<double> spo2_pct;
    bool hr_valid = false;
    bool spo2_valid = false;
    std::vector<std::size_t> peak_indices;
    std::optional<double> ratio_r;

    bool valid() const { return hr_valid && spo2_valid; }
    bool operator==(const ConventionalEstimate&) const = default;
};

/// Quadratic calibration -45.060 R^2 + 30.354 R + 94.845, clamped to [70, 100].
double spo2_from_ratio(double ratio);

/// Subtracts a centred moving average of `window` samples (shrinking at the
/// edges).
std::vector<double> remove_dc(std::span<const double> samples, std::size_t window);

/// Local maxima with at least `min_prominence`, thinned so no two kept peaks
/// are closer than `min_distance` samples (taller peaks win). Sorted.
std::vector<std::size_t> detect_peaks(std::span<const double> samples, std::size_t min_distance,
                                      double min_prominence);

/// DC removal, zero-phase band-pass, IR peak detection, HR from the mean
/// inter-peak interval and SpO2 from the red/IR ratio of ratios. Values that
/// fail the gates are left absent and their flag false.
ConventionalEstimate estimate_conventional(const wire::SensorBurst& burst,
                                           const ConventionalConfig& config = {});

/// Percentage of estimates with both HR and SpO2 valid. Throws EmptyInput.
double availability(std::span<const ConventionalEstimate> results);

}  // namespace vitalink::dsp
