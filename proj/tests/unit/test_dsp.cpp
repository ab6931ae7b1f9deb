#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "support/oracles.hpp"
#include "vitalink/dsp/activity.hpp"
#include "vitalink/dsp/app_chain.hpp"
#include "vitalink/dsp/conventional.hpp"
#include "vitalink/dsp/filter.hpp"
#include "vitalink/error.hpp"
#include "vitalink/wire/synthetic.hpp"

using namespace vitalink;
using namespace vitalink::dsp;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> conv(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    return out;
}

// Expands a cascade into one transfer-function polynomial pair.
std::pair<std::vector<double>, std::vector<double>> expand(const Coefficients& c) {
    std::vector<double> b{1.0}, a{1.0};
    for (const auto& s : c.sections) {
        b = conv(b, {s.b0, s.b1, s.b2});
        a = conv(a, {1.0, s.a1, s.a2});
    }
    return {b, a};
}

double db(double mag) { return 20.0 * std::log10(mag); }

wire::SensorBurst sinusoid_burst(double f_hz, double dc = 20000.0, double amp = 400.0) {
    auto b = wire::SensorBurst::zeroed();
    for (std::size_t i = 0; i < wire::kPpgSamples; ++i) {
        const double t = static_cast<double>(i) / wire::kPpgRateHz;
        const double s = std::sin(2.0 * kPi * f_hz * t);
        b.ir[i] = static_cast<std::uint16_t>(std::lround(dc + amp * s));
        b.red[i] = static_cast<std::uint16_t>(std::lround(0.8 * dc + 0.6 * amp * 0.8 * s));
    }
    return b;
}

}  // namespace

TEST_CASE("design_filter rejects cutoffs outside (0, fs/2)") {
    CHECK_THROWS_AS(design_filter(FilterSpec::low_pass(3.0, 1.0)), InvalidCutoff);
    CHECK_THROWS_AS(design_filter(FilterSpec::low_pass(0.0, 31.0)), InvalidCutoff);
    CHECK_THROWS_AS(design_filter(FilterSpec::high_pass(15.5, 31.0)), InvalidCutoff);
    CHECK_THROWS_AS(design_filter(FilterSpec::band_pass(2.5, 0.5, 31.0)), InvalidCutoff);
    CHECK_THROWS_AS(design_filter(FilterSpec::low_pass(3.0, 31.0, 0)), ConfigError);
}

TEST_CASE("low-pass has unity DC gain") {
    const auto c = design_filter(FilterSpec::low_pass(3.0, 31.0));
    CHECK(std::abs(frequency_response(c, 0.0, 31.0)) == doctest::Approx(1.0).epsilon(1e-6));
    const auto [b, a] = expand(c);
    CHECK(oracle::tf_magnitude(b, a, 0.0, 31.0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("band-pass 0.5-2.5 Hz at 31 Hz attenuation") {
    const auto c = design_filter(FilterSpec::band_pass(0.5, 2.5, 31.0));
    const auto [b, a] = expand(c);
    // DC is a double zero of the high-pass half; evaluate just above it too.
    CHECK(-db(oracle::tf_magnitude(b, a, 1e-4, 31.0)) >= 40.0);
    CHECK(-db(oracle::tf_magnitude(b, a, 10.0, 31.0)) >= 20.0);
    CHECK(std::abs(frequency_response(c, 0.0, 31.0)) < 1e-12);
    CHECK(std::abs(db(oracle::tf_magnitude(b, a, 1.0, 31.0))) < 1.0);
    // Both routes agree.
    for (double f : {0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 15.0}) {
        CHECK(std::abs(frequency_response(c, f, 31.0)) ==
              doctest::Approx(oracle::tf_magnitude(b, a, f, 31.0)).epsilon(1e-9));
    }
}

TEST_CASE("designed filters are stable") {
    CHECK(is_stable(design_filter(FilterSpec::low_pass(3.0, 31.0))));
    CHECK(is_stable(design_filter(FilterSpec::band_pass(0.5, 2.5, 31.0))));
    CHECK(is_stable(design_filter(FilterSpec::high_pass(0.2, 34.0))));
    for (int order = 1; order <= 8; ++order) {
        CHECK(is_stable(design_filter(FilterSpec::band_pass(0.5, 2.5, 31.0, order))));
        CHECK(is_stable(design_filter(FilterSpec::high_pass(0.2, 34.4, order))));
    }
}

TEST_CASE("apply_filter basics") {
    SUBCASE("identity passes an impulse") {
        std::vector<double> x(16, 0.0);
        x[0] = 1.0;
        CHECK(apply_filter(Coefficients::identity(), x) == x);
    }
    SUBCASE("high-pass settles a constant to zero") {
        const auto c = design_filter(FilterSpec::high_pass(0.2, 34.0));
        const std::vector<double> x(34 * 60, 500.0);
        const auto y = apply_filter(c, x);
        REQUIRE(y.size() == x.size());
        double tail = 0.0;
        for (std::size_t i = y.size() - 34; i < y.size(); ++i) tail += y[i];
        tail /= 34.0;
        CHECK(std::abs(tail) < 1e-3 * 500.0);
    }
    SUBCASE("1 Hz passes the band-pass within 1 dB") {
        const double fs = 31.0;
        const auto c = design_filter(FilterSpec::band_pass(0.5, 2.5, fs));
        std::vector<double> x(static_cast<std::size_t>(fs * 60));
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(2.0 * kPi * 1.0 * i / fs);
        const auto y = apply_filter(c, x);
        double peak = 0.0;
        for (std::size_t i = y.size() - static_cast<std::size_t>(fs * 10); i < y.size(); ++i) {
            peak = std::max(peak, std::abs(y[i]));
        }
        const auto [b, a] = expand(c);
        CHECK(std::abs(db(peak)) < 1.0);
        CHECK(peak == doctest::Approx(oracle::tf_magnitude(b, a, 1.0, fs)).epsilon(5e-3));
    }
    SUBCASE("linear time invariance") {
        const auto c = design_filter(FilterSpec::band_pass(0.5, 2.5, 31.0));
        std::vector<double> x(100), x2(100), shifted(100, 0.0);
        for (std::size_t i = 0; i < 100; ++i) {
            x[i] = std::sin(0.3 * i) + 0.1 * i;
            x2[i] = 3.0 * x[i];
            if (i >= 5) shifted[i] = x[i - 5];
        }
        const auto y = apply_filter(c, x);
        const auto y2 = apply_filter(c, x2);
        const auto ys = apply_filter(c, shifted);
        for (std::size_t i = 0; i < 100; ++i) {
            CHECK(y2[i] == doctest::Approx(3.0 * y[i]).epsilon(1e-9));
            if (i >= 5) CHECK(ys[i] == doctest::Approx(y[i - 5]).epsilon(1e-9));
        }
    }
}

TEST_CASE("spo2 calibration quadratic") {
    // -45.060 * 0.36 + 30.354 * 0.6 + 94.845
    CHECK(spo2_from_ratio(0.6) == doctest::Approx(96.8358).epsilon(1e-9));
    CHECK(std::abs(spo2_from_ratio(0.6) - 96.84) <= 0.01);
    CHECK(spo2_from_ratio(3.0) == 70.0);
}

TEST_CASE("peak detection honours spacing and prominence") {
    std::vector<double> x{0, 5, 0, 4.9, 0, 0, 0, 0, 0, 0, 0, 0, 3, 0, 0.1, 0.05, 0};
    const auto peaks = detect_peaks(x, 3, 1.0);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0] == 1);
    CHECK(peaks[1] == 12);
    CHECK(detect_peaks(std::vector<double>(20, 1.0), 1, 0.0).empty());
}

TEST_CASE("conventional estimate on a 1.2 Hz sinusoid") {
    const auto est = estimate_conventional(sinusoid_burst(1.2));
    REQUIRE(est.hr_valid);
    CHECK(*est.hr_bpm == doctest::Approx(72.0).epsilon(2.0 / 72.0));
    CHECK(est.spo2_valid);
    REQUIRE(est.ratio_r);
    CHECK(*est.ratio_r == doctest::Approx(0.6).epsilon(0.02));
}

TEST_CASE("flat line is invalid") {
    auto b = wire::SensorBurst::zeroed();
    std::fill(b.ir.begin(), b.ir.end(), 20000);
    std::fill(b.red.begin(), b.red.end(), 16000);
    const auto est = estimate_conventional(b);
    CHECK_FALSE(est.hr_valid);
    CHECK_FALSE(est.spo2_valid);
    CHECK_FALSE(est.hr_bpm);
    CHECK_FALSE(est.spo2_pct);
}

TEST_CASE("low DC is gated") {
    const auto est = estimate_conventional(sinusoid_burst(1.2, 500.0, 20.0));
    CHECK_FALSE(est.valid());
}

TEST_CASE("HR sweep 0.7..3.0 Hz within 3 BPM") {
    for (int step = 0; step <= 46; ++step) {
        const double f = 0.7 + 0.05 * step;
        CAPTURE(f);
        const auto est = estimate_conventional(sinusoid_burst(f));
        REQUIRE(est.hr_valid);
        CHECK(std::abs(*est.hr_bpm - 60.0 * f) <= 3.0);
    }
}

TEST_CASE("estimate is deterministic") {
    wire::SyntheticVitals v;
    v.noise_counts = 30.0;
    const auto burst = wire::make_burst(v, 99);
    CHECK(estimate_conventional(burst) == estimate_conventional(burst));
}

TEST_CASE("availability") {
    ConventionalEstimate ok;
    ok.hr_valid = ok.spo2_valid = true;
    ConventionalEstimate bad;
    std::vector<ConventionalEstimate> all(10, ok);
    CHECK(availability(all) == 100.0);
    for (int i = 0; i < 3; ++i) all[i] = bad;
    CHECK(availability(all) == 70.0);
    CHECK_THROWS_AS(availability(std::vector<ConventionalEstimate>{}), EmptyInput);

    std::vector<ConventionalEstimate> growing{ok, bad, ok};
    double prev = availability(growing);
    for (int i = 0; i < 20; ++i) {
        growing.push_back(bad);
        const double now = availability(growing);
        CHECK(now <= prev);
        prev = now;
    }
}

TEST_CASE("activity baseline") {
    const std::vector<double> zero(136, 0.0);
    CHECK(classify_activity_baseline(zero, zero, zero) == ActivityLabel::Sit);

    auto oscillation = [](double f, double amp) {
        std::vector<double> z(136);
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = 1.0 + amp * std::sin(2.0 * kPi * f * i / 34.0);
        return z;
    };
    // Oracle: brute-force variance of |a| with gravity on z.
    auto variance = [](const std::vector<double>& z) {
        double m = 0.0;
        for (double v : z) m += std::abs(v);
        m /= double(z.size());
        double s = 0.0;
        for (double v : z) s += (std::abs(v) - m) * (std::abs(v) - m);
        return s / double(z.size());
    };
    const ActivityThresholds t;
    const auto walk = oscillation(2.0, 0.5);
    const auto run = oscillation(3.0, 1.5);
    const double v_walk = variance(walk);
    const double v_run = variance(run);
    CHECK(v_walk > t.sit_walk_g2);
    CHECK(v_walk < t.walk_run_g2);
    CHECK(v_run >= t.walk_run_g2);
    CHECK(magnitude_variance(zero, zero, walk) == doctest::Approx(v_walk).epsilon(1e-9));
    CHECK(classify_activity_baseline(zero, zero, walk) == ActivityLabel::Walk);
    CHECK(classify_activity_baseline(zero, zero, run) == ActivityLabel::Run);

    CHECK(classify_activity_baseline(wire::make_burst(wire::preset("walk"))) == ActivityLabel::Walk);
    CHECK(classify_activity_baseline(wire::make_burst(wire::preset("run"))) == ActivityLabel::Run);
    CHECK(classify_activity_baseline(wire::make_burst(wire::preset("normal"))) == ActivityLabel::Sit);
    CHECK(parse_activity("walk") == ActivityLabel::Walk);
    CHECK_FALSE(parse_activity("dance"));
}

TEST_CASE("companion filter chain") {
    const auto burst = wire::make_burst(wire::preset("walk"));
    const auto out = app_filter_chain(burst);
    CHECK(out.temperature_fallback);
    CHECK(out.temp_wrist.size() == 4);
    CHECK(out.temp_wrist[1] == doctest::Approx(33.0));
    CHECK(out.ir.size() == 124);
    CHECK(out.accel_z.size() == 136);

    AppChainConfig fast;
    fast.temperature = FilterSpec::low_pass(3.0, 31.0);
    CHECK_FALSE(app_filter_chain(burst, fast).temperature_fallback);
}
