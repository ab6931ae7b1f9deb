#include "vitalink/dsp/app_chain.hpp"

#include <algorithm>
#include <optional>

#include "vitalink/error.hpp"

namespace vitalink::dsp {

std::vector<double> moving_average(const std::vector<double>& x, std::size_t window) {
    const std::size_t n = x.size();
    window = std::max<std::size_t>(1, window);
    const std::size_t half = window / 2;
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(n, i + half + 1);
        double sum = 0.0;
        for (std::size_t k = lo; k < hi; ++k) sum += x[k];
        out[i] = sum / static_cast<double>(hi - lo);
    }
    return out;
}

namespace {

template <typename T>
std::vector<double> scaled(const std::vector<T>& v, double factor = 1.0) {
    std::vector<double> out(v.size());
    std::ranges::transform(v, out.begin(), [&](T s) { return static_cast<double>(s) * factor; });
    return out;
}

}  // namespace

FilteredBurst app_filter_chain(const wire::SensorBurst& burst, const AppChainConfig& cfg) {
    wire::validate(burst);
    FilteredBurst out;

    const Coefficients ppg = design_filter(cfg.ppg);
    out.ir = apply_filter(ppg, scaled(burst.ir));
    out.red = apply_filter(ppg, scaled(burst.red));

    const Coefficients accel = design_filter(cfg.accel);
    out.accel_x = apply_filter(accel, scaled(burst.accel_x));
    out.accel_y = apply_filter(accel, scaled(burst.accel_y));
    out.accel_z = apply_filter(accel, scaled(burst.accel_z));

    std::optional<Coefficients> temp;
    try {
        temp = design_filter(cfg.temperature);
    } catch (const InvalidCutoff&) {
        out.temperature_fallback = true;
    }
    const auto wrist = scaled(burst.temp_wrist, 0.01);
    const auto ambient = scaled(burst.temp_ambient, 0.01);
    if (temp) {
        out.temp_wrist = apply_filter(*temp, wrist);
        out.temp_ambient = apply_filter(*temp, ambient);
    } else {
        out.temp_wrist = moving_average(wrist, cfg.temp_fallback_window);
        out.temp_ambient = moving_average(ambient, cfg.temp_fallback_window);
    }
    return out;
}

}  // namespace vitalink::dsp
