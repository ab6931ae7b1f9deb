#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "vitalink/dsp/activity.hpp"
#include "vitalink/wire/burst.hpp"

namespace vitalink::eval {

/// Column names and rates of the recording CSVs. One file per recording,
/// named `<subject>_<activity>.csv` (e.g. `s3_walk.csv`), one row per PPG
/// sample. Slower channels leave their cells empty on rows without a sample:
/// the IMU columns carry a value every `ppg_rate_hz / imu_rate_hz` rows and
/// the reference columns only where the reference device reported.
struct DatasetLayout {
    std::string time_column = "time";  // seconds from recording start
    std::string ir_column = "ir";      // ADC counts
    std::string red_column = "red";    // ADC counts
    std::string accel_x_column = "a_x";  // g
    std::string accel_y_column = "a_y";
    std::string accel_z_column = "a_z";
    std::string hr_column = "hr";      // BPM
    std::string spo2_column = "spo2";  // percent
    std::string temp_column = "temp";  // degrees C at the wrist, optional
    double ppg_rate_hz = 1000.0;
    double imu_rate_hz = 500.0;
    /// File-name activity to ground-truth label.
    std::map<std::string, dsp::ActivityLabel> activity_map = {
        {"sit", dsp::ActivityLabel::Sit}, {"walk", dsp::ActivityLabel::Walk}, {"run", dsp::ActivityLabel::Run}};
};

/// One recording, units normalized: PPG in counts scaled into 16 bits,
/// acceleration in g, temperature in degrees C.
struct ReferenceRecord {
    std::string subject_id;
    std::string activity_name;
    dsp::ActivityLabel activity = dsp::ActivityLabel::Sit;
    std::filesystem::path file;

    double ppg_rate_hz = 1000.0;
    std::vector<double> ir, red;
    /// Right shift applied to both PPG channels to fit 16-bit counts. The
    /// shift is common to both, so AC/DC ratios are unchanged.
    int ppg_shift = 0;

    double imu_rate_hz = 500.0;
    std::vector<double> accel_x, accel_y, accel_z;

    std::vector<double> ref_time, ref_hr;      // hr samples and their times
    std::vector<double> spo2_time, ref_spo2;   // spo2 samples and their times
    std::optional<double> temp_wrist_c;        // recording mean if present

    /// Channels absent from the file; the record is still usable.
    std::vector<std::string> missing_channels;

    double duration_s() const { return ir.empty() ? 0.0 : static_cast<double>(ir.size()) / ppg_rate_hz; }
};

/// Reads every `<subject>_<activity>.csv` in `dir`, ordered by subject number
/// then file name. Throws MissingFile if the directory is absent or holds no
/// recordings, SchemaMismatch naming the file on a missing required column,
/// a short row or a non-numeric cell, or an activity outside the map.
std::vector<ReferenceRecord> ingest(const std::filesystem::path& dir, const DatasetLayout& layout = {});

/// Linear interpolation of `signal` (rate fs_in) at t = k / fs_out for every
/// k with t inside the input span [0, (n - 1) / fs_in]. An empty signal gives
/// an empty result. Throws InvalidRate unless fs_in >= fs_out > 0.
std::vector<double> downsample(std::span<const double> signal, double fs_in, double fs_out);

/// One 4 s window with its reference pairing.
struct Segment {
    std::string subject_id;
    std::string activity_name;
    std::size_t recording = 0;  // index into the ingested list
    std::size_t window = 0;
    wire::SensorBurst burst;
    std::optional<double> ref_hr, ref_spo2;
    dsp::ActivityLabel truth = dsp::ActivityLabel::Sit;
};

/// Counts per g used when converting acceleration to device counts.
inline constexpr double kSegmentCountsPerG = 256.0;
/// Ambient temperature written into segments; the dataset has none.
inline constexpr double kSegmentAmbientC = 25.0;
inline constexpr double kSegmentDefaultWristC = 33.0;

/// Non-overlapping 4 s windows from the start, trailing partial window
/// dropped. Each window is resampled to the band's rates. The reference is
/// the mean of the reference samples inside the window, or the linear
/// interpolation at the window centre when the window holds none. A missing
/// IMU is written as a motionless band (1 g on z).
std::vector<Segment> segment(const ReferenceRecord& record, std::size_t recording_index = 0);

/// Generates a dataset in the layout above from synthetic pulse waveforms:
/// `subjects` subjects, one sit, walk and run recording each of `seconds`.
/// Running adds motion artifacts to the PPG so quality gating has something
/// to reject. Deterministic for a given seed.
struct SyntheticDatasetSpec {
    int subjects = 3;
    double seconds = 40.0;
    std::uint64_t seed = 7;
};
void make_synthetic_dataset(const std::filesystem::path& dir, const SyntheticDatasetSpec& spec = {},
                            const DatasetLayout& layout = {});

}  // namespace vitalink::eval
