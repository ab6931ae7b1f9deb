#include "vitalink/dsp/activity.hpp"

#include <cmath>
#include <vector>

#include "vitalink/error.hpp"

namespace vitalink::dsp {

std::string_view to_string(ActivityLabel label) {
    switch (label) {
        case ActivityLabel::Sit: return "sit";
        case ActivityLabel::Walk: return "walk";
        case ActivityLabel::Run: return "run";
    }
    return "sit";
}

std::optional<ActivityLabel> parse_activity(std::string_view text) {
    if (text == "sit") return ActivityLabel::Sit;
    if (text == "walk") return ActivityLabel::Walk;
    if (text == "run") return ActivityLabel::Run;
    return std::nullopt;
}

double magnitude_variance(std::span<const double> x, std::span<const double> y,
                          std::span<const double> z) {
    if (x.empty() || x.size() != y.size() || x.size() != z.size()) {
        throw LengthMismatch("accelerometer axes must be non-empty and equally long");
    }
    // Welford, to stay exact-ish around the 1 g offset.
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double mag = std::sqrt(x[i] * x[i] + y[i] * y[i] + z[i] * z[i]);
        const double delta = mag - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (mag - mean);
    }
    return m2 / static_cast<double>(x.size());
}

ActivityLabel classify_activity_baseline(std::span<const double> x, std::span<const double> y,
                                         std::span<const double> z,
                                         const ActivityThresholds& t) {
    const double var = magnitude_variance(x, y, z);
    if (var < t.sit_walk_g2) return ActivityLabel::Sit;
    if (var < t.walk_run_g2) return ActivityLabel::Walk;
    return ActivityLabel::Run;
}

ActivityLabel classify_activity_baseline(const wire::SensorBurst& burst,
                                         const ActivityThresholds& t) {
    auto scale = [&](const std::vector<std::int16_t>& axis) {
        std::vector<double> g(axis.size());
        for (std::size_t i = 0; i < axis.size(); ++i) g[i] = axis[i] / t.counts_per_g;
        return g;
    };
    const auto x = scale(burst.accel_x);
    const auto y = scale(burst.accel_y);
    const auto z = scale(burst.accel_z);
    return classify_activity_baseline(x, y, z, t);
}

}  // namespace vitalink::dsp
