#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "vitalink/dsp/conventional.hpp"
#include "vitalink/eval/dataset.hpp"
#include "vitalink/eval/metrics.hpp"
#include "vitalink/interpreter/model_client.hpp"
#include "vitalink/interpreter/vital_estimate.hpp"

namespace vitalink::eval {

struct MethodSummary {
    std::optional<double> hr_mae, spo2_mae;  // absent when nothing was scored
    double availability_pct = 0.0;           // both HR and SpO2 present
    double activity_accuracy_pct = 0.0;
    std::size_t hr_scored = 0, spo2_scored = 0;
    ConfusionMatrix confusion;
};

struct SubjectSummary {
    std::string subject_id;
    std::size_t segments = 0;
    MethodSummary conventional, llm;
};

/// Per-window outcome of both paths. The LLM path always yields one row; a
/// failed call is an all-absent estimate.
struct SegmentResult {
    std::string subject_id;
    std::string activity_name;
    std::size_t window = 0;
    std::optional<double> ref_hr, ref_spo2;
    dsp::ActivityLabel truth = dsp::ActivityLabel::Sit;
    dsp::ConventionalEstimate conventional;
    dsp::ActivityLabel conventional_activity = dsp::ActivityLabel::Sit;
    interpreter::VitalEstimate llm;
    std::optional<std::string> llm_error;
};

struct ComparisonReport {
    std::string client;  // label of the model client used
    std::size_t recordings = 0;
    std::vector<SegmentResult> segments;  // ordered by subject, recording, window
    MethodSummary conventional, llm;
    std::vector<SubjectSummary> subjects;
    std::map<std::string, std::vector<std::string>> missing_channels;  // file -> channels
};

/// Figures published for the original study, carried in the report for
/// side-by-side reading. Never asserted.
struct PublishedReference {
    static constexpr std::size_t traces = 1003;
    static constexpr double conventional_hr_mae = 22.49, llm_hr_mae = 11.96;
    static constexpr double conventional_spo2_mae = 2.30, llm_spo2_mae = 1.39;
    static constexpr double conventional_availability_pct = 70.29, llm_availability_pct = 100.00;
    static constexpr double conventional_activity_pct = 32.80, llm_activity_pct = 38.48;
};

struct ComparisonOptions {
    interpreter::ModelParams params = interpreter::ModelParams::interpreter_defaults();
    dsp::ConventionalConfig conventional;
    dsp::ActivityThresholds activity;
    unsigned threads = 0;  // 0 = hardware concurrency
    std::string client_label = "stub";
};

/// Runs both estimator paths on every segment. Work is spread over threads;
/// results are reduced in segment order, so the report does not depend on
/// scheduling. `client` must be safe for concurrent use.
ComparisonReport run_comparison(const std::vector<ReferenceRecord>& records, interpreter::ModelClient& client,
                                const ComparisonOptions& options = {});
/// ingest + run_comparison.
ComparisonReport run_comparison(const std::filesystem::path& dataset_dir, interpreter::ModelClient& client,
                                const ComparisonOptions& options = {}, const DatasetLayout& layout = {});

/// Client that answers every interpreter prompt built from one of `segments`
/// with that segment's reference values. Unknown prompts throw
/// ClientUnavailable.
std::unique_ptr<interpreter::ModelClient> reference_echo_client(const std::vector<Segment>& segments);

nlohmann::ordered_json to_json(const ComparisonReport& report);
std::string per_subject_deltas_csv(const ComparisonReport& report);
/// Densities of signed error (prediction - reference) per method and metric.
std::string error_density_csv(const ComparisonReport& report);
std::string confusion_csv(const ComparisonReport& report);
/// One row per window with both paths' outputs; empty cells are absent values.
std::string estimates_csv(const ComparisonReport& report);
/// Writes report.json, per_subject_deltas.csv, error_density.csv and
/// confusion.csv into `out_dir`, creating it if needed.
void write_report(const ComparisonReport& report, const std::filesystem::path& out_dir);

}  // namespace vitalink::eval
