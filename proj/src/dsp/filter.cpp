#include "vitalink/dsp/filter.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "vitalink/error.hpp"

namespace vitalink::dsp {

FilterSpec FilterSpec::low_pass(double fc, double fs, int order) {
    return {FilterKind::LowPass, fc, 0.0, fs, order};
}

FilterSpec FilterSpec::high_pass(double fc, double fs, int order) {
    return {FilterKind::HighPass, fc, 0.0, fs, order};
}

FilterSpec FilterSpec::band_pass(double lo, double hi, double fs, int order) {
    return {FilterKind::BandPass, lo, hi, fs, order};
}

namespace {

void check_cutoff(double fc, double fs) {
    if (!(fc > 0.0) || !(fc < fs / 2.0)) {
        throw InvalidCutoff("cutoff " + std::to_string(fc) + " Hz outside (0, " +
                            std::to_string(fs / 2.0) + ") Hz");
    }
}

// Butterworth cascade for one edge. Even orders are all biquads; an odd order
// adds one first-order section.
void append_butterworth(std::vector<Biquad>& out, bool high_pass, double fc, double fs, int order) {
    const double k = std::tan(std::numbers::pi * fc / fs);
    const double k2 = k * k;
    for (int i = 0; i < order / 2; ++i) {
        const double q =
            1.0 / (2.0 * std::sin(std::numbers::pi * (2.0 * i + 1.0) / (2.0 * order)));
        const double norm = 1.0 / (1.0 + k / q + k2);
        Biquad s;
        if (high_pass) {
            s.b0 = norm;
            s.b1 = -2.0 * norm;
            s.b2 = norm;
        } else {
            s.b0 = k2 * norm;
            s.b1 = 2.0 * k2 * norm;
            s.b2 = k2 * norm;
        }
        s.a1 = 2.0 * (k2 - 1.0) * norm;
        s.a2 = (1.0 - k / q + k2) * norm;
        out.push_back(s);
    }
    if (order % 2 == 1) {
        const double norm = 1.0 / (1.0 + k);
        Biquad s;
        if (high_pass) {
            s.b0 = norm;
            s.b1 = -norm;
        } else {
            s.b0 = k * norm;
            s.b1 = k * norm;
        }
        s.a1 = (k - 1.0) * norm;
        out.push_back(s);
    }
}

}  // namespace

Coefficients design_filter(const FilterSpec& spec) {
    if (!(spec.sample_rate_hz > 0.0)) {
        throw InvalidCutoff("sample rate must be positive");
    }
    if (spec.order < 1) {
        throw ConfigError("filter order must be positive");
    }
    Coefficients c;
    switch (spec.kind) {
        case FilterKind::LowPass:
            check_cutoff(spec.cutoff_hz, spec.sample_rate_hz);
            append_butterworth(c.sections, false, spec.cutoff_hz, spec.sample_rate_hz, spec.order);
            break;
        case FilterKind::HighPass:
            check_cutoff(spec.cutoff_hz, spec.sample_rate_hz);
            append_butterworth(c.sections, true, spec.cutoff_hz, spec.sample_rate_hz, spec.order);
            break;
        case FilterKind::BandPass:
            check_cutoff(spec.cutoff_hz, spec.sample_rate_hz);
            check_cutoff(spec.cutoff_high_hz, spec.sample_rate_hz);
            if (!(spec.cutoff_hz < spec.cutoff_high_hz)) {
                throw InvalidCutoff("band-pass lower edge must be below the upper edge");
            }
            append_butterworth(c.sections, true, spec.cutoff_hz, spec.sample_rate_hz, spec.order);
            append_butterworth(c.sections, false, spec.cutoff_high_hz, spec.sample_rate_hz,
                               spec.order);
            break;
    }
    return c;
}

std::vector<double> apply_filter(const Coefficients& coeffs, std::span<const double> samples) {
    std::vector<double> y(samples.begin(), samples.end());
    for (const Biquad& s : coeffs.sections) {
        // Transposed direct form II.
        double z1 = 0.0, z2 = 0.0;
        for (double& v : y) {
            const double x = v;
            const double out = s.b0 * x + z1;
            z1 = s.b1 * x - s.a1 * out + z2;
            z2 = s.b2 * x - s.a2 * out;
            v = out;
        }
    }
    return y;
}

std::vector<double> apply_filter_zero_phase(const Coefficients& coeffs,
                                            std::span<const double> samples, std::size_t pad) {
    const std::size_t n = samples.size();
    if (n == 0) return {};
    pad = std::min(pad, n - 1);

    std::vector<double> ext;
    ext.reserve(n + 2 * pad);
    for (std::size_t i = pad; i >= 1; --i) {
        ext.push_back(2.0 * samples[0] - samples[i]);
    }
    ext.insert(ext.end(), samples.begin(), samples.end());
    for (std::size_t i = 1; i <= pad; ++i) {
        ext.push_back(2.0 * samples[n - 1] - samples[n - 1 - i]);
    }

    auto fwd = apply_filter(coeffs, ext);
    std::reverse(fwd.begin(), fwd.end());
    auto back = apply_filter(coeffs, fwd);
    std::reverse(back.begin(), back.end());
    return {back.begin() + static_cast<std::ptrdiff_t>(pad),
            back.begin() + static_cast<std::ptrdiff_t>(pad + n)};
}

std::complex<double> frequency_response(const Coefficients& coeffs, double freq_hz,
                                        double sample_rate_hz) {
    const double w = 2.0 * std::numbers::pi * freq_hz / sample_rate_hz;
    const std::complex<double> z1 = std::polar(1.0, -w);
    const std::complex<double> z2 = z1 * z1;
    std::complex<double> h = 1.0;
    for (const Biquad& s : coeffs.sections) {
        h *= (s.b0 + s.b1 * z1 + s.b2 * z2) / (1.0 + s.a1 * z1 + s.a2 * z2);
    }
    return h;
}

std::vector<std::complex<double>> poles(const Coefficients& coeffs) {
    std::vector<std::complex<double>> out;
    for (const Biquad& s : coeffs.sections) {
        if (s.a2 == 0.0) {
            if (s.a1 != 0.0) out.emplace_back(-s.a1, 0.0);
            continue;
        }
        // z^2 + a1 z + a2 = 0
        const std::complex<double> disc = std::sqrt(std::complex<double>(s.a1 * s.a1 - 4.0 * s.a2));
        out.push_back((-s.a1 + disc) / 2.0);
        out.push_back((-s.a1 - disc) / 2.0);
    }
    return out;
}

bool is_stable(const Coefficients& coeffs) {
    return std::ranges::all_of(poles(coeffs),
                               [](const std::complex<double>& p) { return std::abs(p) < 1.0; });
}

}  // namespace vitalink::dsp
