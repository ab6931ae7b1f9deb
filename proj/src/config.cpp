#include "vitalink/config.hpp"

#include <fstream>
#include <set>

#include "vitalink/agent_tools/cron.hpp"
#include "vitalink/error.hpp"

namespace vitalink {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

/// One JSON object of the config. Reads keys into existing defaults and
/// rejects any key nobody asked for.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + " must be an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }
    void mark(const std::string& key) { seen_.insert(key); }

    template <typename T>
    void get(const std::string& key, T& out) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            out = j_.at(key).get<T>();
        } catch (const json::exception&) {
            throw ConfigError(path_ + "." + key + " has the wrong type");
        }
    }

    void get(const std::string& key, fs::path& out, const fs::path& base) {
        std::string s;
        get(key, s);
        if (j_.contains(key)) out = s.empty() || fs::path(s).is_absolute() || base.empty() ? fs::path(s) : base / s;
    }

    void get_ms(const std::string& key, std::chrono::milliseconds& out) {
        std::int64_t ms = out.count();
        get(key, ms);
        if (ms <= 0) throw ConfigError(path_ + "." + key + " must be > 0");
        out = std::chrono::milliseconds(ms);
    }

    Section sub(const std::string& key) {
        seen_.insert(key);
        return Section(j_.contains(key) ? j_.at(key) : empty(), path_ + "." + key);
    }

    void finish() const {
        for (const auto& item : j_.items()) {
            if (!seen_.contains(item.key())) throw ConfigError("unknown config key " + path_ + "." + item.key());
        }
    }

private:
    static const json& empty() {
        static const json e = json::object();
        return e;
    }

    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void read_conventional(Section s, dsp::ConventionalConfig& c) {
    s.get("sample_rate_hz", c.sample_rate_hz);
    s.get("band_low_hz", c.band_low_hz);
    s.get("band_high_hz", c.band_high_hz);
    s.get("filter_order", c.filter_order);
    s.get("dc_window_s", c.dc_window_s);
    s.get("min_peak_spacing_s", c.min_peak_spacing_s);
    s.get("prominence_fraction", c.prominence_fraction);
    s.get("min_ac_counts", c.min_ac_counts);
    s.get("min_hr_bpm", c.min_hr_bpm);
    s.get("max_hr_bpm", c.max_hr_bpm);
    s.get("dc_floor_counts", c.dc_floor_counts);
    s.get("min_ratio", c.min_ratio);
    s.get("max_ratio", c.max_ratio);
    s.finish();
    if (!(c.sample_rate_hz > 0.0) || !(c.band_low_hz > 0.0) || !(c.band_low_hz < c.band_high_hz) ||
        !(c.band_high_hz < c.sample_rate_hz / 2.0)) {
        throw ConfigError("dsp.conventional band must satisfy 0 < low < high < sample_rate / 2");
    }
    if (c.filter_order < 1) throw ConfigError("dsp.conventional.filter_order must be >= 1");
    if (!(c.min_hr_bpm < c.max_hr_bpm) || !(c.min_ratio < c.max_ratio)) {
        throw ConfigError("dsp.conventional gate ranges must be increasing");
    }
}

void read_activity(Section s, dsp::ActivityThresholds& a) {
    s.get("sit_walk_g2", a.sit_walk_g2);
    s.get("walk_run_g2", a.walk_run_g2);
    s.get("counts_per_g", a.counts_per_g);
    s.finish();
    if (!(a.sit_walk_g2 < a.walk_run_g2) || !(a.counts_per_g > 0.0)) {
        throw ConfigError("dsp.activity needs sit_walk_g2 < walk_run_g2 and counts_per_g > 0");
    }
}

void read_thresholds(Section s, orchestrator::Thresholds& t) {
    s.get("hr_low", t.hr_low);
    s.get("hr_high", t.hr_high);
    s.get("hr_sustain", t.hr_sustain);
    s.get("spo2_low", t.spo2_low);
    s.get("temp_high", t.temp_high);
    s.finish();
    t.validate();
}

void read_router(Section s, orchestrator::OrchestratorConfig& o, std::string& classifier) {
    auto& r = o.router;
    auto tiers = s.sub("tiers");
    tiers.get("simple", r.tiers.simple);
    tiers.get("reasoning", r.tiers.reasoning);
    tiers.get("high_risk", r.tiers.high_risk);
    tiers.finish();
    s.get("router_model", r.router_model);
    s.get("baseline_model", r.baseline_model);
    s.get("classifier", classifier);
    if (classifier != "heuristic" && classifier != "model") {
        throw ConfigError("router.classifier must be \"heuristic\" or \"model\"");
    }
    if (s.has("prices")) {
        std::map<std::string, double> prices;
        s.get("prices", prices);
        o.prices.per_1k_usd = {prices.begin(), prices.end()};
    }
    s.mark("prices");
    o.prices.validate();
    s.get("high_risk_terms", r.rules.high_risk_terms);
    s.get("reasoning_terms", r.rules.reasoning_terms);
    s.get("long_query_tokens", r.rules.long_query_tokens);
    s.finish();
    for (const auto* m : {&r.tiers.simple, &r.tiers.reasoning, &r.tiers.high_risk, &r.router_model, &r.baseline_model}) {
        o.prices.price(*m);  // throws UnknownModel for an unpriced model
    }
}

}  // namespace

ServiceConfig parse_config(const json& j, const fs::path& base) {
    ServiceConfig c;
    Section root(j, "config");
    try {
        {
            auto s = root.sub("gateway");
            s.get("host", c.gateway.host);
            s.get("port", c.gateway.port);
            s.get("token_secret", c.gateway.token_secret);
            s.get("pbkdf2_iterations", c.gateway.pbkdf2_iterations);
            s.get("max_body_bytes", c.gateway.max_body_bytes);
            s.get_ms("evaluation_period_ms", c.gateway.evaluation_period);
            s.get_ms("retry_period_ms", c.gateway.retry_period);
            s.finish();
            if (c.gateway.port < 0 || c.gateway.port > 65535) throw ConfigError("gateway.port must be in 0..65535");
            if (c.gateway.pbkdf2_iterations < 1) throw ConfigError("gateway.pbkdf2_iterations must be >= 1");
        }
        {
            auto s = root.sub("storage");
            s.get("data_dir", c.data_dir, base);
            s.finish();
        }
        {
            auto s = root.sub("transport");
            s.get("kind", c.transport);
            s.get("file", c.transport_file, {});
            s.finish();
            if (c.transport != "loopback" && c.transport != "jsonl") {
                throw ConfigError("transport.kind must be \"loopback\" or \"jsonl\"");
            }
        }
        {
            auto s = root.sub("model");
            s.get("client", c.model_client);
            s.get("timeout_s", c.model_timeout_s);
            s.finish();
            if (c.model_client != "stub" && c.model_client != "live") {
                throw ConfigError("model.client must be \"stub\" or \"live\"");
            }
        }
        read_router(root.sub("router"), c.orchestrator, c.classifier);
        {
            auto s = root.sub("dsp");
            read_conventional(s.sub("conventional"), c.orchestrator.interpret.conventional);
            read_activity(s.sub("activity"), c.orchestrator.interpret.activity);
            s.finish();
        }
        {
            auto s = root.sub("interpreter");
            auto& p = c.orchestrator.interpreter_params;
            s.get("model", p.model_name);
            s.get("temperature", p.temperature);
            s.get("top_p", p.top_p);
            s.get("retries", c.orchestrator.interpret.retries);
            s.get("fallback_to_conventional", c.orchestrator.interpret.fallback_to_conventional);
            s.finish();
            p.validate();
            if (c.orchestrator.interpret.retries < 0) throw ConfigError("interpreter.retries must be >= 0");
        }
        {
            auto s = root.sub("orchestrator");
            auto& o = c.orchestrator;
            s.get("history_turns", o.windows.history_turns);
            s.get("metrics", o.windows.metrics);
            s.get("minimal_history_turns", o.windows.minimal_history_turns);
            s.get("minimal_metrics", o.windows.minimal_metrics);
            s.get("rag_k", o.rag_k);
            s.get("qc_model", o.qc_model);
            s.get("extraction_model", o.extraction_model);
            s.get("alert_cooldown_s", o.alert_cooldown_s);
            s.get("no_data_cron", o.no_data_cron);
            s.get("no_data_interval_s", o.no_data_interval_s);
            read_thresholds(s.sub("thresholds"), o.default_thresholds);
            s.finish();
            agent_tools::CronExpr::parse(o.no_data_cron);
            if (o.alert_cooldown_s < 0 || o.no_data_interval_s <= 0) {
                throw ConfigError("orchestrator intervals must be non-negative");
            }
        }
        {
            auto s = root.sub("knowledge");
            s.get("corpus_dir", c.corpus_dir, base);
            s.finish();
        }
        {
            auto s = root.sub("scheduler");
            s.get_ms("period_ms", c.scheduler_period);
            s.finish();
        }
        {
            auto s = root.sub("eval");
            auto& d = c.dataset;
            auto cols = s.sub("columns");
            cols.get("time", d.time_column);
            cols.get("ir", d.ir_column);
            cols.get("red", d.red_column);
            cols.get("accel_x", d.accel_x_column);
            cols.get("accel_y", d.accel_y_column);
            cols.get("accel_z", d.accel_z_column);
            cols.get("hr", d.hr_column);
            cols.get("spo2", d.spo2_column);
            cols.get("temp", d.temp_column);
            cols.finish();
            s.get("ppg_rate_hz", d.ppg_rate_hz);
            s.get("imu_rate_hz", d.imu_rate_hz);
            if (s.has("activity_map")) {
                std::map<std::string, std::string> names;
                s.get("activity_map", names);
                d.activity_map.clear();
                for (const auto& [file_name, label] : names) {
                    const auto parsed = dsp::parse_activity(label);
                    if (!parsed) throw ConfigError("eval.activity_map." + file_name + " must be sit, walk or run");
                    d.activity_map[file_name] = *parsed;
                }
            }
            s.mark("activity_map");
            s.finish();
            if (!(d.ppg_rate_hz >= wire::kPpgRateHz) || !(d.imu_rate_hz >= wire::kAccelRateHz)) {
                throw ConfigError("eval rates must be at least the band's rates");
            }
        }
        root.finish();
    } catch (const InvalidCron& e) {
        throw ConfigError(std::string("orchestrator.no_data_cron: ") + e.what());
    } catch (const UnknownModel& e) {
        throw ConfigError(std::string("model has no price: ") + e.what());
    }
    return c;
}

ServiceConfig load_config(const fs::path& file) {
    std::ifstream in(file);
    if (!in) throw ConfigError("cannot read config " + file.string());
    const json j = json::parse(in, nullptr, false, true);
    if (j.is_discarded()) throw ConfigError("config " + file.string() + " is not valid JSON");
    return parse_config(j, file.parent_path());
}

}  // namespace vitalink
