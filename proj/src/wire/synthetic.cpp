#include "vitalink/wire/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "vitalink/error.hpp"

namespace vitalink::wire {

namespace {

constexpr double kA = -45.060;
constexpr double kB = 30.354;
constexpr double kC = 94.845;

// PPG baseline wander coupled from wrist motion, as a fraction of DC per g.
constexpr double kMotionArtifactPerG = 0.012;

template <typename T>
T saturate(double v) {
    const double lo = static_cast<double>(std::numeric_limits<T>::min());
    const double hi = static_cast<double>(std::numeric_limits<T>::max());
    return static_cast<T>(std::lround(std::clamp(v, lo, hi)));
}

}  // namespace

double ratio_for_spo2(double spo2_pct) {
    const double disc = kB * kB - 4.0 * kA * (kC - spo2_pct);
    if (disc <= 0.0) {
        return -kB / (2.0 * kA);  // vertex, ~99.96 %
    }
    return (-kB - std::sqrt(disc)) / (2.0 * kA);
}

SensorBurst make_burst(const SyntheticVitals& v, std::uint32_t ts, std::string device_id) {
    SensorBurst b = SensorBurst::zeroed(ts, std::move(device_id));
    std::mt19937_64 rng(v.seed * 0x9E3779B97F4A7C15ULL + ts);
    std::normal_distribution<double> noise(0.0, 1.0);

    const double two_pi = 2.0 * std::numbers::pi;
    const double f_hr = v.hr_bpm / 60.0;
    const double ratio = ratio_for_spo2(v.spo2_pct);
    const double ir_amp = v.perfusion_index * v.ir_dc / 2.0;
    const double red_dc = 0.8 * v.ir_dc;
    const double red_amp = ratio * v.perfusion_index * red_dc / 2.0;

    for (std::size_t i = 0; i < kPpgSamples; ++i) {
        const double t = static_cast<double>(i) / kPpgRateHz;
        const double pulse = std::sin(two_pi * f_hr * t);
        const double motion =
            v.motion_amplitude_g * kMotionArtifactPerG * std::sin(two_pi * v.motion_freq_hz * t + 0.5);
        const double n_ir = v.noise_counts > 0 ? v.noise_counts * noise(rng) : 0.0;
        const double n_red = v.noise_counts > 0 ? v.noise_counts * noise(rng) : 0.0;
        b.ir[i] = saturate<std::uint16_t>(v.ir_dc * (1.0 + motion) + ir_amp * pulse + n_ir);
        b.red[i] = saturate<std::uint16_t>(red_dc * (1.0 + motion) + red_amp * pulse + n_red);
    }
    for (std::size_t i = 0; i < kAccelSamples; ++i) {
        const double t = static_cast<double>(i) / kAccelRateHz;
        const double dyn = v.motion_amplitude_g * std::sin(two_pi * v.motion_freq_hz * t);
        b.accel_x[i] = saturate<std::int16_t>(0.02 * v.counts_per_g);
        b.accel_y[i] = saturate<std::int16_t>(-0.03 * v.counts_per_g);
        b.accel_z[i] = saturate<std::int16_t>(v.counts_per_g * (1.0 + dyn));
    }
    for (std::size_t i = 0; i < kTempSamples; ++i) {
        b.temp_wrist[i] = saturate<std::uint16_t>(v.temp_wrist_c * 100.0);
        b.temp_ambient[i] = saturate<std::uint16_t>(v.temp_ambient_c * 100.0);
    }
    return b;
}

SyntheticVitals preset(const std::string& name) {
    SyntheticVitals v;
    if (name == "normal") return v;
    if (name == "high-hr") {
        v.hr_bpm = 138.0;
        return v;
    }
    if (name == "low-spo2") {
        v.spo2_pct = 88.0;
        return v;
    }
    if (name == "walk") {
        v.hr_bpm = 96.0;
        v.motion_amplitude_g = 0.5;
        v.motion_freq_hz = 2.0;
        return v;
    }
    if (name == "run") {
        v.hr_bpm = 150.0;
        v.motion_amplitude_g = 1.5;
        v.motion_freq_hz = 3.0;
        return v;
    }
    throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace vitalink::wire
