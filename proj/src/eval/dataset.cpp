#include "vitalink/eval/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <regex>

#include "vitalink/error.hpp"
#include "vitalink/wire/synthetic.hpp"

namespace vitalink::eval {

namespace fs = std::filesystem;

namespace {

const std::regex kRecordingName(R"(^([A-Za-z]+)(\d+)_([A-Za-z]+)\.csv$)");

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '"')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '"' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::optional<double> number(std::string_view cell, const fs::path& file, std::size_t line) {
    cell = trim(cell);
    if (cell.empty() || cell == "NaN" || cell == "nan") return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size() || !std::isfinite(v)) {
        throw SchemaMismatch(file.string() + ": line " + std::to_string(line) + " has non-numeric cell '" +
                             std::string(cell) + "'");
    }
    return v;
}

ReferenceRecord read_recording(const fs::path& file, const std::string& subject, const std::string& activity,
                               const DatasetLayout& layout) {
    ReferenceRecord rec;
    rec.subject_id = subject;
    rec.activity_name = activity;
    rec.file = file;
    rec.ppg_rate_hz = layout.ppg_rate_hz;
    rec.imu_rate_hz = layout.imu_rate_hz;
    const auto mapped = layout.activity_map.find(activity);
    if (mapped == layout.activity_map.end()) {
        throw SchemaMismatch(file.string() + ": activity '" + activity + "' is not in the activity map");
    }
    rec.activity = mapped->second;

    std::ifstream in(file);
    if (!in) throw MissingFile("cannot open " + file.string());
    std::string line;
    if (!std::getline(in, line)) throw SchemaMismatch(file.string() + ": empty file");
    const auto header = split(line);
    auto column = [&](const std::string& name) -> std::optional<std::size_t> {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (trim(header[i]) == name) return i;
        }
        return std::nullopt;
    };
    const auto time_col = column(layout.time_column), ir_col = column(layout.ir_column),
               red_col = column(layout.red_column);
    for (const auto& [col, name] : {std::pair{time_col, layout.time_column}, std::pair{ir_col, layout.ir_column},
                                    std::pair{red_col, layout.red_column}}) {
        if (!col) throw SchemaMismatch(file.string() + ": missing required column '" + name + "'");
    }
    const auto ax = column(layout.accel_x_column), ay = column(layout.accel_y_column),
               az = column(layout.accel_z_column);
    const bool has_imu = ax && ay && az;
    const auto hr_col = column(layout.hr_column), spo2_col = column(layout.spo2_column),
               temp_col = column(layout.temp_column);
    if (!has_imu) rec.missing_channels.push_back("accel");
    if (!hr_col) rec.missing_channels.push_back("hr");
    if (!spo2_col) rec.missing_channels.push_back("spo2");

    double temp_sum = 0.0;
    std::size_t temp_n = 0, line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split(line);
        if (cells.size() != header.size()) {
            throw SchemaMismatch(file.string() + ": line " + std::to_string(line_no) + " has " +
                                 std::to_string(cells.size()) + " fields, expected " + std::to_string(header.size()));
        }
        const auto t = number(cells[*time_col], file, line_no);
        const auto ir = number(cells[*ir_col], file, line_no);
        const auto red = number(cells[*red_col], file, line_no);
        if (!t || !ir || !red) {
            throw SchemaMismatch(file.string() + ": line " + std::to_string(line_no) + " lacks time or PPG values");
        }
        rec.ir.push_back(std::max(0.0, *ir));
        rec.red.push_back(std::max(0.0, *red));
        if (has_imu) {
            const auto x = number(cells[*ax], file, line_no), y = number(cells[*ay], file, line_no),
                       z = number(cells[*az], file, line_no);
            if (x && y && z) {
                rec.accel_x.push_back(*x);
                rec.accel_y.push_back(*y);
                rec.accel_z.push_back(*z);
            }
        }
        if (hr_col) {
            if (const auto v = number(cells[*hr_col], file, line_no)) {
                rec.ref_time.push_back(*t);
                rec.ref_hr.push_back(*v);
            }
        }
        if (spo2_col) {
            if (const auto v = number(cells[*spo2_col], file, line_no)) {
                rec.spo2_time.push_back(*t);
                rec.ref_spo2.push_back(*v);
            }
        }
        if (temp_col) {
            if (const auto v = number(cells[*temp_col], file, line_no)) {
                temp_sum += *v;
                ++temp_n;
            }
        }
    }
    if (rec.ir.empty()) throw SchemaMismatch(file.string() + ": no samples");
    if (has_imu && rec.accel_x.empty()) rec.missing_channels.push_back("accel");
    if (hr_col && rec.ref_hr.empty()) rec.missing_channels.push_back("hr");
    if (spo2_col && rec.ref_spo2.empty()) rec.missing_channels.push_back("spo2");
    if (temp_n) rec.temp_wrist_c = temp_sum / static_cast<double>(temp_n);

    const double peak = std::max(*std::max_element(rec.ir.begin(), rec.ir.end()),
                                 *std::max_element(rec.red.begin(), rec.red.end()));
    while (peak / std::ldexp(1.0, rec.ppg_shift) > 65535.0) ++rec.ppg_shift;
    if (rec.ppg_shift) {
        const double scale = std::ldexp(1.0, -rec.ppg_shift);
        for (auto& v : rec.ir) v *= scale;
        for (auto& v : rec.red) v *= scale;
    }
    return rec;
}

/// Mean of the samples inside [t0, t1), else the interpolation at the centre
/// (held constant beyond the ends).
std::optional<double> window_reference(const std::vector<double>& t, const std::vector<double>& v, double t0,
                                       double t1) {
    if (v.empty()) return std::nullopt;
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] >= t0 && t[i] < t1) {
            sum += v[i];
            ++n;
        }
    }
    if (n) return sum / static_cast<double>(n);
    const double c = 0.5 * (t0 + t1);
    if (c <= t.front()) return v.front();
    if (c >= t.back()) return v.back();
    const auto hi = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), c) - t.begin());
    const auto lo = hi - 1;
    const double f = (c - t[lo]) / (t[hi] - t[lo]);
    return v[lo] + f * (v[hi] - v[lo]);
}

template <typename T>
T saturate(double x) {
    const double r = std::round(x);
    return static_cast<T>(std::clamp(r, static_cast<double>(std::numeric_limits<T>::min()),
                                     static_cast<double>(std::numeric_limits<T>::max())));
}

/// Resamples a 4 s slice to exactly `n` samples, padding with the last value
/// if the source is short.
std::vector<double> window_slice(const std::vector<double>& x, double fs_in, double fs_out, std::size_t start,
                                 std::size_t len, std::size_t n) {
    if (start >= x.size()) return {};
    const auto end = std::min(x.size(), start + len);
    auto out = downsample(std::span<const double>(x).subspan(start, end - start), fs_in, fs_out);
    if (out.empty()) return {};
    out.resize(n, out.back());
    return out;
}

}  // namespace

std::vector<ReferenceRecord> ingest(const fs::path& dir, const DatasetLayout& layout) {
    if (!fs::is_directory(dir)) throw MissingFile("dataset directory not found: " + dir.string());
    struct Entry {
        long number;
        std::string name, subject, activity;
        fs::path path;
    };
    std::vector<Entry> entries;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        const auto name = e.path().filename().string();
        std::smatch m;
        if (!std::regex_match(name, m, kRecordingName)) continue;
        entries.push_back({std::stol(m[2]), name, m[1].str() + m[2].str(), m[3].str(), e.path()});
    }
    if (entries.empty()) throw MissingFile("no <subject>_<activity>.csv recordings in " + dir.string());
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return std::tie(a.number, a.name) < std::tie(b.number, b.name); });
    std::vector<ReferenceRecord> out;
    out.reserve(entries.size());
    for (const auto& e : entries) out.push_back(read_recording(e.path, e.subject, e.activity, layout));
    return out;
}

std::vector<double> downsample(std::span<const double> signal, double fs_in, double fs_out) {
    if (!(fs_out > 0.0) || !(fs_in >= fs_out) || !std::isfinite(fs_in)) {
        throw InvalidRate("downsample needs fs_in >= fs_out > 0, got " + std::to_string(fs_in) + " -> " +
                          std::to_string(fs_out));
    }
    if (signal.empty()) return {};
    const double step = fs_in / fs_out;  // input samples per output sample
    const auto last = static_cast<double>(signal.size() - 1);
    // Tolerance keeps k = n exactly when (n-1)/step is an integer up to rounding.
    const auto count = static_cast<std::size_t>(std::floor(last / step + 1e-9)) + 1;
    std::vector<double> out(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double pos = std::min(static_cast<double>(k) * step, last);
        const auto i = static_cast<std::size_t>(pos);
        const double f = pos - static_cast<double>(i);
        out[k] = (i + 1 < signal.size() && f > 0.0) ? signal[i] + f * (signal[i + 1] - signal[i]) : signal[i];
    }
    return out;
}

std::vector<Segment> segment(const ReferenceRecord& record, std::size_t recording_index) {
    std::vector<Segment> out;
    const auto ppg_len = static_cast<std::size_t>(std::llround(wire::kWindowSeconds * record.ppg_rate_hz));
    const auto imu_len = static_cast<std::size_t>(std::llround(wire::kWindowSeconds * record.imu_rate_hz));
    if (ppg_len == 0) return out;
    const std::size_t windows = record.ir.size() / ppg_len;
    const double wrist = record.temp_wrist_c.value_or(kSegmentDefaultWristC);
    for (std::size_t w = 0; w < windows; ++w) {
        Segment s;
        s.subject_id = record.subject_id;
        s.activity_name = record.activity_name;
        s.recording = recording_index;
        s.window = w;
        s.truth = record.activity;
        auto& b = s.burst;
        b.ts = static_cast<std::uint32_t>(w * static_cast<std::size_t>(wire::kWindowSeconds));
        b.device_id = record.subject_id;
        const auto ir = window_slice(record.ir, record.ppg_rate_hz, wire::kPpgRateHz, w * ppg_len, ppg_len, wire::kPpgSamples);
        const auto red = window_slice(record.red, record.ppg_rate_hz, wire::kPpgRateHz, w * ppg_len, ppg_len, wire::kPpgSamples);
        for (std::size_t i = 0; i < wire::kPpgSamples; ++i) {
            b.ir.push_back(saturate<std::uint16_t>(ir[i]));
            b.red.push_back(saturate<std::uint16_t>(red[i]));
        }
        auto axis = [&](const std::vector<double>& a, double rest_g) {
            auto v = window_slice(a, record.imu_rate_hz, wire::kAccelRateHz, w * imu_len, imu_len, wire::kAccelSamples);
            if (v.empty()) v.assign(wire::kAccelSamples, rest_g);
            std::vector<std::int16_t> counts;
            counts.reserve(v.size());
            for (double g : v) counts.push_back(saturate<std::int16_t>(g * kSegmentCountsPerG));
            return counts;
        };
        b.accel_x = axis(record.accel_x, 0.0);
        b.accel_y = axis(record.accel_y, 0.0);
        b.accel_z = axis(record.accel_z, 1.0);
        b.temp_wrist.assign(wire::kTempSamples, saturate<std::uint16_t>(wrist * 100.0));
        b.temp_ambient.assign(wire::kTempSamples, saturate<std::uint16_t>(kSegmentAmbientC * 100.0));
        const double t0 = static_cast<double>(w) * wire::kWindowSeconds, t1 = t0 + wire::kWindowSeconds;
        s.ref_hr = window_reference(record.ref_time, record.ref_hr, t0, t1);
        s.ref_spo2 = window_reference(record.spo2_time, record.ref_spo2, t0, t1);
        out.push_back(std::move(s));
    }
    return out;
}

void make_synthetic_dataset(const fs::path& dir, const SyntheticDatasetSpec& spec, const DatasetLayout& layout) {
    if (spec.subjects < 1 || !(spec.seconds > 0.0)) throw ConfigError("synthetic dataset needs subjects >= 1 and seconds > 0");
    fs::create_directories(dir);
    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    struct Activity {
        const char* name;
        double hr_offset, motion_g, motion_hz, artifact;
    };
    const Activity activities[] = {{"sit", 0.0, 0.0, 0.0, 0.0}, {"walk", 25.0, 0.3, 1.8, 0.0}, {"run", 55.0, 1.0, 2.7, 1.0}};
    const double fs = layout.ppg_rate_hz;
    const auto imu_every = std::max<long>(1, std::lround(fs / layout.imu_rate_hz));
    const auto ref_every = static_cast<long>(std::lround(fs));  // 1 Hz reference
    const auto n = static_cast<long>(std::floor(spec.seconds * fs));
    constexpr double two_pi = 2.0 * std::numbers::pi;

    for (int s = 1; s <= spec.subjects; ++s) {
        const double base_hr = 58.0 + 4.0 * s;
        const double spo2 = 95.0 + (s % 4);
        const double ratio = wire::ratio_for_spo2(spo2);
        const double ir_dc = 110000.0 + 5000.0 * s, red_dc = 80000.0 + 3000.0 * s;
        const double pi_ir = 0.015 + 0.002 * (s % 3);
        for (const auto& act : activities) {
            std::ofstream out(dir / ("s" + std::to_string(s) + "_" + act.name + ".csv"));
            if (!out) throw StorageFailure("cannot write synthetic dataset into " + dir.string());
            out << layout.time_column << ',' << layout.ir_column << ',' << layout.red_column << ','
                << layout.accel_x_column << ',' << layout.accel_y_column << ',' << layout.accel_z_column << ','
                << layout.hr_column << ',' << layout.spo2_column << ',' << layout.temp_column << '\n';
            double phase = 0.0;
            // Windows where the band lost skin contact: PPG collapses to noise.
            std::bernoulli_distribution dropout(act.artifact > 0.0 ? 0.3 : 0.0);
            bool lifted = false;
            for (long i = 0; i < n; ++i) {
                const double t = static_cast<double>(i) / fs;
                if (i % static_cast<long>(std::lround(4.0 * fs)) == 0) lifted = dropout(rng);
                const double hr = base_hr + act.hr_offset + 3.0 * std::sin(two_pi * t / 30.0);
                phase += hr / 60.0 / fs;
                const double pulse = std::sin(two_pi * phase) + 0.35 * std::sin(2.0 * two_pi * phase - 0.8);
                const double artifact = act.artifact * 0.01 * std::sin(two_pi * 2.0 * act.motion_hz * t);
                double ir = ir_dc * (1.0 + pi_ir * pulse + artifact) + 40.0 * gauss(rng);
                double red = red_dc * (1.0 + pi_ir * ratio * pulse + artifact) + 40.0 * gauss(rng);
                if (lifted) {
                    ir = 300.0 + 2.0 * gauss(rng);
                    red = 250.0 + 2.0 * gauss(rng);
                }
                out << t << ',' << std::lround(ir) << ',' << std::lround(red) << ',';
                if (i % imu_every == 0) {
                    const double m = act.motion_g * std::sin(two_pi * act.motion_hz * t);
                    out << 0.02 * gauss(rng) + 0.4 * m << ',' << 0.02 * gauss(rng) + 0.2 * m << ','
                        << 1.0 + 0.02 * gauss(rng) + m;
                } else {
                    out << ",,";
                }
                out << ',';
                if (i % ref_every == 0) out << std::lround(hr) << ',' << spo2 << ',' << 33.0 + 0.1 * s;
                else out << ",,";
                out << '\n';
            }
        }
    }
}

}  // namespace vitalink::eval
