#include "vitalink/dsp/conventional.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "vitalink/dsp/filter.hpp"
#include "vitalink/error.hpp"

namespace vitalink::dsp {

double spo2_from_ratio(double r) {
    const double spo2 = -45.060 * r * r + 30.354 * r + 94.845;
    return std::clamp(spo2, 70.0, 100.0);
}

std::vector<double> remove_dc(std::span<const double> x, std::size_t window) {
    const std::size_t n = x.size();
    std::vector<double> out(n);
    if (n == 0) return out;
    window = std::max<std::size_t>(1, window);
    const std::size_t half = window / 2;

    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + x[i];

    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t lo = i >= half ? i - half : 0;
        const std::size_t hi = std::min(n, i + half + 1);
        out[i] = x[i] - (prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
    }
    return out;
}

namespace {

struct Candidate {
    std::size_t index;
    double height;
};

double prominence(std::span<const double> x, std::size_t p) {
    double left_min = x[p];
    for (std::size_t k = p; k-- > 0;) {
        if (x[k] > x[p]) break;
        left_min = std::min(left_min, x[k]);
    }
    double right_min = x[p];
    for (std::size_t k = p + 1; k < x.size(); ++k) {
        if (x[k] > x[p]) break;
        right_min = std::min(right_min, x[k]);
    }
    return x[p] - std::max(left_min, right_min);
}

double refine(std::span<const double> x, std::size_t p) {
    if (p == 0 || p + 1 >= x.size()) return static_cast<double>(p);
    const double l = x[p - 1], c = x[p], r = x[p + 1];
    const double denom = l - 2.0 * c + r;
    if (denom >= 0.0) return static_cast<double>(p);
    return static_cast<double>(p) + 0.5 * (l - r) / denom;
}

double rms(std::span<const double> x) {
    if (x.empty()) return 0.0;
    const double ss = std::inner_product(x.begin(), x.end(), x.begin(), 0.0);
    return std::sqrt(ss / static_cast<double>(x.size()));
}

template <typename T>
std::vector<double> to_double(const std::vector<T>& v) {
    return {v.begin(), v.end()};
}

}  // namespace

std::vector<std::size_t> detect_peaks(std::span<const double> x, std::size_t min_distance,
                                      double min_prominence) {
    std::vector<Candidate> candidates;
    const std::size_t n = x.size();
    std::size_t i = 1;
    while (i + 1 < n) {
        if (x[i] > x[i - 1]) {
            std::size_t end = i;
            while (end + 1 < n && x[end + 1] == x[i]) ++end;
            if (end + 1 < n && x[end + 1] < x[i]) {
                const std::size_t mid = (i + end) / 2;
                if (prominence(x, mid) >= min_prominence) {
                    candidates.push_back({mid, x[mid]});
                }
            }
            i = end + 1;
        } else {
            ++i;
        }
    }

    std::ranges::stable_sort(candidates, [](const Candidate& a, const Candidate& b) {
        return a.height > b.height;
    });
    std::vector<std::size_t> kept;
    for (const Candidate& c : candidates) {
        const bool clear = std::ranges::none_of(kept, [&](std::size_t k) {
            const std::size_t d = k > c.index ? k - c.index : c.index - k;
            return d < min_distance;
        });
        if (clear) kept.push_back(c.index);
    }
    std::ranges::sort(kept);
    return kept;
}

ConventionalEstimate estimate_conventional(const wire::SensorBurst& burst,
                                           const ConventionalConfig& cfg) {
    ConventionalEstimate est;
    const auto ir = to_double(burst.ir);
    const auto red = to_double(burst.red);
    if (ir.size() < 3 || red.size() != ir.size()) return est;

    const double fs = cfg.sample_rate_hz;
    const double dc_ir = std::accumulate(ir.begin(), ir.end(), 0.0) / static_cast<double>(ir.size());
    const double dc_red =
        std::accumulate(red.begin(), red.end(), 0.0) / static_cast<double>(red.size());

    const auto window = static_cast<std::size_t>(std::lround(cfg.dc_window_s * fs));
    const Coefficients band =
        design_filter(FilterSpec::band_pass(cfg.band_low_hz, cfg.band_high_hz, fs, cfg.filter_order));
    const auto pad = static_cast<std::size_t>(std::lround(2.0 * fs));
    const auto ir_ac = apply_filter_zero_phase(band, remove_dc(ir, window), pad);
    const auto red_ac = apply_filter_zero_phase(band, remove_dc(red, window), pad);

    const auto [lo, hi] = std::ranges::minmax(ir_ac);
    const double p2p = hi - lo;
    if (p2p >= cfg.min_ac_counts) {
        const auto min_distance = static_cast<std::size_t>(std::floor(cfg.min_peak_spacing_s * fs));
        est.peak_indices = detect_peaks(ir_ac, std::max<std::size_t>(1, min_distance),
                                        cfg.prominence_fraction * p2p);
    }

    const bool dc_ok = dc_ir >= cfg.dc_floor_counts && dc_red >= cfg.dc_floor_counts;
    if (est.peak_indices.size() >= 2 && dc_ir >= cfg.dc_floor_counts) {
        const double first = refine(ir_ac, est.peak_indices.front());
        const double last = refine(ir_ac, est.peak_indices.back());
        const double interval = (last - first) / static_cast<double>(est.peak_indices.size() - 1);
        if (interval > 0.0) {
            const double hr = 60.0 * fs / interval;
            if (hr >= cfg.min_hr_bpm && hr <= cfg.max_hr_bpm) {
                est.hr_bpm = hr;
                est.hr_valid = true;
            }
        }
    }

    const double ac_ir = rms(ir_ac);
    const double ac_red = rms(red_ac);
    if (ac_ir > 0.0 && dc_ir > 0.0 && dc_red > 0.0) {
        const double r = (ac_red / dc_red) / (ac_ir / dc_ir);
        est.ratio_r = r;
        if (est.hr_valid && dc_ok && r >= cfg.min_ratio && r <= cfg.max_ratio) {
            est.spo2_pct = spo2_from_ratio(r);
            est.spo2_valid = true;
        }
    }
    return est;
}

double availability(std::span<const ConventionalEstimate> results) {
    if (results.empty()) {
        throw EmptyInput("availability of an empty result list");
    }
    const auto valid = std::ranges::count_if(results, [](const auto& r) { return r.valid(); });
    return 100.0 * static_cast<double>(valid) / static_cast<double>(results.size());
}

}  // namespace vitalink::dsp
