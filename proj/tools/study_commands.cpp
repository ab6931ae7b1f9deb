#include <cstdio>
#include <fstream>
#include <iostream>

#include "commands.hpp"
#include "vitalink/config.hpp"
#include "vitalink/eval/comparison.hpp"
#include "vitalink/router/router.hpp"

namespace vitalink::cli {

namespace {

/// Published relative reduction of the tiered router, for side-by-side reading.
constexpr double kReferenceReductionPct = 56.57;

ServiceConfig config_or_default(const std::string& path) { return path.empty() ? ServiceConfig{} : load_config(path); }

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out << text;
    if (!out) throw Failure("cannot write " + p.string());
}

struct CostOptions {
    std::string queries = VITALINK_DATA_DIR "/queries_sample.txt";
    std::string out = "cost_study";
    std::string config;
    std::string classifier;  // empty = from config
    std::string client = "stub";
};

void run_cost_study(const CostOptions& o) {
    const auto cfg = config_or_default(o.config);
    const auto queries = router::load_queries(o.queries);
    const auto kind = o.classifier.empty() ? cfg.classifier : o.classifier;
    std::unique_ptr<interpreter::ModelClient> client;
    std::unique_ptr<router::Classifier> classifier;
    if (kind == "model") {
        client = make_model_client(o.client, cfg.model_timeout_s);
        interpreter::ModelParams params;
        params.model_name = cfg.orchestrator.router.router_model;
        classifier = std::make_unique<router::ModelClassifier>(*client, params, cfg.orchestrator.router.rules);
    } else if (kind == "heuristic") {
        classifier = std::make_unique<router::HeuristicClassifier>(cfg.orchestrator.router.rules);
    } else {
        throw Failure("--classifier must be heuristic or model");
    }
    const auto study = router::cost_study(queries, cfg.orchestrator.prices, *classifier, cfg.orchestrator.router);
    std::filesystem::create_directories(o.out);
    write_file(std::filesystem::path(o.out) / "cost_study.json", study.to_json() + "\n");
    write_file(std::filesystem::path(o.out) / "cost_study.csv", study.to_csv());

    std::size_t routes[3] = {0, 0, 0};
    for (const auto& q : study.queries) ++routes[static_cast<int>(q.route)];
    std::printf("queries: %zu (simple %zu, reasoning %zu, high_risk %zu)\n", study.queries.size(), routes[0],
                routes[1], routes[2]);
    std::printf("tiered:                 %.6f USD\n", study.total_tiered);
    std::printf("tiered + router pass:   %.6f USD\n", study.total_tiered_with_overhead);
    std::printf("single-model baseline:  %.6f USD\n", study.total_baseline);
    std::printf("relative reduction:     %.2f%% (%.2f%% with router pass; reference %.2f%% on a different query set)\n",
                100.0 * study.relative_reduction(), 100.0 * study.relative_reduction_with_overhead(),
                kReferenceReductionPct);
    std::printf("wrote %s/cost_study.json and cost_study.csv\n", o.out.c_str());
}

struct EvalOptions {
    std::string dataset;
    std::string client = "stub";
    std::string out;
    std::string config;
    unsigned threads = 0;
    bool estimates = false;
};

void print_row(const char* name, const std::optional<double>& ours, double reference, const char* unit) {
    if (ours) {
        std::printf("  %-28s %10.2f %s   (reference %.2f)\n", name, *ours, unit, reference);
    } else {
        std::printf("  %-28s %10s %s   (reference %.2f)\n", name, "n/a", unit, reference);
    }
}

void run_eval(const EvalOptions& o) {
    const auto cfg = config_or_default(o.config);
    auto client = make_model_client(o.client, cfg.model_timeout_s);
    eval::ComparisonOptions options;
    options.params = cfg.orchestrator.interpreter_params;
    options.conventional = cfg.orchestrator.interpret.conventional;
    options.activity = cfg.orchestrator.interpret.activity;
    options.threads = o.threads;
    options.client_label = o.client;
    const auto report = eval::run_comparison(o.dataset, *client, options, cfg.dataset);
    eval::write_report(report, o.out);
    if (o.estimates) write_file(std::filesystem::path(o.out) / "estimates.csv", eval::estimates_csv(report));

    using Ref = eval::PublishedReference;
    std::printf("recordings %zu, segments %zu (reference trace count %zu)\n", report.recordings,
                report.segments.size(), Ref::traces);
    for (const auto& [file, channels] : report.missing_channels) {
        std::string list;
        for (const auto& c : channels) list += (list.empty() ? "" : ", ") + c;
        std::printf("  %s: missing %s\n", file.c_str(), list.c_str());
    }
    std::printf("conventional:\n");
    print_row("HR MAE", report.conventional.hr_mae, Ref::conventional_hr_mae, "BPM");
    print_row("SpO2 MAE", report.conventional.spo2_mae, Ref::conventional_spo2_mae, "%  ");
    print_row("availability", report.conventional.availability_pct, Ref::conventional_availability_pct, "%  ");
    print_row("activity accuracy", report.conventional.activity_accuracy_pct, Ref::conventional_activity_pct, "%  ");
    std::printf("llm (%s):\n", o.client.c_str());
    print_row("HR MAE", report.llm.hr_mae, Ref::llm_hr_mae, "BPM");
    print_row("SpO2 MAE", report.llm.spo2_mae, Ref::llm_spo2_mae, "%  ");
    print_row("availability", report.llm.availability_pct, Ref::llm_availability_pct, "%  ");
    print_row("activity accuracy", report.llm.activity_accuracy_pct, Ref::llm_activity_pct, "%  ");
    std::printf("wrote report.json, per_subject_deltas.csv, error_density.csv, confusion.csv%s to %s\n",
                o.estimates ? ", estimates.csv" : "", o.out.c_str());
}

}  // namespace

void add_cost_study(CLI::App& app) {
    auto o = std::make_shared<CostOptions>();
    auto* cmd = app.add_subcommand("cost-study", "Price a query set under tiered routing and a single-model baseline");
    cmd->add_option("--queries", o->queries, "Line-delimited query file")->capture_default_str();
    cmd->add_option("--out", o->out, "Output directory")->capture_default_str();
    cmd->add_option("--config", o->config, "Service config (prices, tiers, classifier rules)");
    cmd->add_option("--classifier", o->classifier, "heuristic or model (default: from config)");
    cmd->add_option("--client", o->client, "Model client for --classifier model: stub or live")->capture_default_str();
    cmd->callback([o] { run_cost_study(*o); });
}

void add_eval(CLI::App& app) {
    auto o = std::make_shared<EvalOptions>();
    auto* cmd = app.add_subcommand("eval", "Compare the conventional and model paths on a recorded dataset");
    cmd->add_option("--dataset", o->dataset, "Directory of <subject>_<activity>.csv recordings")->required();
    cmd->add_option("--client", o->client, "stub or live")->capture_default_str();
    cmd->add_option("--out", o->out, "Output directory")->required();
    cmd->add_option("--config", o->config, "Service config (gating thresholds, dataset layout)");
    cmd->add_option("--threads", o->threads, "Worker threads (0 = all cores)")->capture_default_str();
    cmd->add_flag("--estimates-csv", o->estimates, "Also write per-window estimates.csv");
    cmd->callback([o] { run_eval(*o); });
}

void add_make_synthetic_dataset(CLI::App& app) {
    auto spec = std::make_shared<eval::SyntheticDatasetSpec>();
    auto out = std::make_shared<std::string>();
    auto* cmd = app.add_subcommand("make-synthetic-dataset", "Write a synthetic dataset in the eval layout");
    cmd->add_option("--out", *out, "Output directory")->required();
    cmd->add_option("--subjects", spec->subjects, "Subjects (three recordings each)")->capture_default_str();
    cmd->add_option("--seconds", spec->seconds, "Length of each recording")->capture_default_str();
    cmd->add_option("--seed", spec->seed, "Noise seed")->capture_default_str();
    cmd->callback([spec, out] {
        eval::make_synthetic_dataset(*out, *spec);
        std::printf("wrote %d subjects x 3 recordings of %.0f s to %s\n", spec->subjects, spec->seconds, out->c_str());
    });
}

}  // namespace vitalink::cli
