#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace vitalink::dsp {

enum class FilterKind { LowPass, HighPass, BandPass };

/// Butterworth filter request. For band-pass, `cutoff_hz` is the lower edge
/// and `cutoff_high_hz` the upper one; band-pass is realised as a high-pass
/// cascaded with a low-pass, each of `order`.
struct FilterSpec {
    FilterKind kind = FilterKind::LowPass;
    double cutoff_hz = 0.0;
    double cutoff_high_hz = 0.0;
    double sample_rate_hz = 0.0;
    int order = 2;

    static FilterSpec low_pass(double fc, double fs, int order = 2);
    static FilterSpec high_pass(double fc, double fs, int order = 2);
    static FilterSpec band_pass(double lo, double hi, double fs, int order = 2);
};

/// One second-order section, a0 normalised to 1:
///   y[n] = b0 x[n] + b1 x[n-1] + b2 x[n-2] - a1 y[n-1] - a2 y[n-2]
struct Biquad {
    double b0 = 1.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;
};

struct Coefficients {
    std::vector<Biquad> sections;

    static Coefficients identity() { return {{Biquad{}}}; }
};

/// Bilinear-transform Butterworth design with prewarped cutoffs.
/// Throws InvalidCutoff when a cutoff is not strictly inside (0, fs/2) or the
/// band edges are out of order, ConfigError for a non-positive order.
Coefficients design_filter(const FilterSpec& spec);

/// Causal cascade, zero initial state. Output has the input's length.
std::vector<double> apply_filter(const Coefficients& coeffs, std::span<const double> samples);

/// Forward-backward filtering with odd reflection padding of `pad` samples
/// (clipped to size-1). Zero phase, squared magnitude response.
std::vector<double> apply_filter_zero_phase(const Coefficients& coeffs,
                                            std::span<const double> samples, std::size_t pad);

std::complex<double> frequency_response(const Coefficients& coeffs, double freq_hz,
                                        double sample_rate_hz);

std::vector<std::complex<double>> poles(const Coefficients& coeffs);

bool is_stable(const Coefficients& coeffs);

}  // namespace vitalink::dsp
