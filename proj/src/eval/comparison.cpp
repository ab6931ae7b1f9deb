#include "vitalink/eval/comparison.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <thread>
#include <unordered_map>

#include "vitalink/error.hpp"
#include "vitalink/interpreter/interpreter.hpp"

namespace vitalink::eval {

using nlohmann::ordered_json;

namespace {

constexpr dsp::ActivityLabel kLabels[] = {dsp::ActivityLabel::Sit, dsp::ActivityLabel::Walk, dsp::ActivityLabel::Run};

std::optional<double> masked_mae(const std::vector<double>& pred, const std::vector<double>& ref,
                                 const std::vector<bool>& mask) {
    try {
        return mae(pred, ref, mask);
    } catch (const EmptyMask&) {
        return std::nullopt;
    }
}

std::optional<dsp::ActivityLabel> llm_activity(const SegmentResult& r) {
    return r.llm.activity ? dsp::parse_activity(*r.llm.activity) : std::nullopt;
}

template <typename Hr, typename Spo2, typename Activity>
MethodSummary summarize(const std::vector<const SegmentResult*>& rows, Hr hr, Spo2 spo2, Activity activity,
                        double availability_pct) {
    MethodSummary s;
    s.availability_pct = availability_pct;
    std::vector<double> hp, hrf, sp, srf;
    std::vector<bool> hm, sm;
    std::vector<dsp::ActivityLabel> pred, truth;
    for (const auto* r : rows) {
        const auto h = hr(*r);
        const bool hv = h && r->ref_hr;
        hp.push_back(h.value_or(0.0));
        hrf.push_back(r->ref_hr.value_or(0.0));
        hm.push_back(hv);
        s.hr_scored += hv;
        const auto o = spo2(*r);
        const bool ov = o && r->ref_spo2;
        sp.push_back(o.value_or(0.0));
        srf.push_back(r->ref_spo2.value_or(0.0));
        sm.push_back(ov);
        s.spo2_scored += ov;
        if (const auto a = activity(*r)) {
            pred.push_back(*a);
            truth.push_back(r->truth);
        }
    }
    s.hr_mae = masked_mae(hp, hrf, hm);
    s.spo2_mae = masked_mae(sp, srf, sm);
    if (!truth.empty()) s.confusion = confusion(pred, truth);
    // Windows without a usable label count as misclassified.
    std::size_t correct = 0;
    for (std::size_t t = 0; t < 3; ++t) correct += s.confusion.counts[t][t];
    s.activity_accuracy_pct = rows.empty() ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(rows.size());
    return s;
}

std::pair<MethodSummary, MethodSummary> summarize_both(const std::vector<const SegmentResult*>& rows) {
    std::vector<dsp::ConventionalEstimate> conv;
    std::size_t llm_available = 0;
    for (const auto* r : rows) {
        conv.push_back(r->conventional);
        llm_available += r->llm.hr && r->llm.spo2;
    }
    const double conv_avail = conv.empty() ? 0.0 : dsp::availability(conv);
    const double llm_avail =
        rows.empty() ? 0.0 : 100.0 * static_cast<double>(llm_available) / static_cast<double>(rows.size());
    auto c = summarize(
        rows, [](const SegmentResult& r) { return r.conventional.hr_valid ? r.conventional.hr_bpm : std::nullopt; },
        [](const SegmentResult& r) { return r.conventional.spo2_valid ? r.conventional.spo2_pct : std::nullopt; },
        [](const SegmentResult& r) { return std::optional(r.conventional_activity); }, conv_avail);
    auto l = summarize(
        rows, [](const SegmentResult& r) { return r.llm.hr; }, [](const SegmentResult& r) { return r.llm.spo2; },
        llm_activity, llm_avail);
    return {std::move(c), std::move(l)};
}

ordered_json opt(const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); }

ordered_json summary_json(const MethodSummary& s, bool with_confusion) {
    ordered_json j;
    j["hr_mae"] = opt(s.hr_mae);
    j["spo2_mae"] = opt(s.spo2_mae);
    j["availability_pct"] = s.availability_pct;
    j["activity_accuracy_pct"] = s.activity_accuracy_pct;
    j["hr_scored"] = s.hr_scored;
    j["spo2_scored"] = s.spo2_scored;
    if (with_confusion) j["confusion"] = s.confusion.counts;
    return j;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string fmt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

ComparisonReport run_comparison(const std::vector<ReferenceRecord>& records, interpreter::ModelClient& client,
                                const ComparisonOptions& options) {
    ComparisonReport report;
    report.client = options.client_label;
    report.recordings = records.size();
    std::vector<Segment> segments;
    for (std::size_t i = 0; i < records.size(); ++i) {
        auto s = segment(records[i], i);
        segments.insert(segments.end(), std::make_move_iterator(s.begin()), std::make_move_iterator(s.end()));
        if (!records[i].missing_channels.empty()) {
            report.missing_channels[records[i].file.filename().string()] = records[i].missing_channels;
        }
    }

    report.segments.resize(segments.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < segments.size(); i = next++) {
            const auto& seg = segments[i];
            auto& r = report.segments[i];
            r.subject_id = seg.subject_id;
            r.activity_name = seg.activity_name;
            r.window = seg.window;
            r.ref_hr = seg.ref_hr;
            r.ref_spo2 = seg.ref_spo2;
            r.truth = seg.truth;
            r.conventional = dsp::estimate_conventional(seg.burst, options.conventional);
            r.conventional_activity = dsp::classify_activity_baseline(seg.burst, options.activity);
            auto unavailable = [&](const Error& e) {
                r.llm = {};
                r.llm.source = interpreter::EstimateSource::Unavailable;
                r.llm.burst_ts = seg.burst.ts;
                r.llm_error = e.what();
            };
            try {
                r.llm = interpreter::interpret(seg.burst, client, options.params);
            } catch (const MalformedReply& e) {
                unavailable(e);
            } catch (const ClientUnavailable& e) {
                unavailable(e);
            }
        }
    };
    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, segments.size())));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    }

    std::vector<const SegmentResult*> all;
    for (const auto& r : report.segments) all.push_back(&r);
    std::tie(report.conventional, report.llm) = summarize_both(all);

    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<const SegmentResult*>> by_subject;
    for (const auto& r : report.segments) {
        auto& rows = by_subject[r.subject_id];
        if (rows.empty()) order.push_back(r.subject_id);
        rows.push_back(&r);
    }
    for (const auto& id : order) {
        SubjectSummary s;
        s.subject_id = id;
        s.segments = by_subject[id].size();
        std::tie(s.conventional, s.llm) = summarize_both(by_subject[id]);
        report.subjects.push_back(std::move(s));
    }
    return report;
}

ComparisonReport run_comparison(const std::filesystem::path& dataset_dir, interpreter::ModelClient& client,
                                const ComparisonOptions& options, const DatasetLayout& layout) {
    return run_comparison(ingest(dataset_dir, layout), client, options);
}

std::unique_ptr<interpreter::ModelClient> reference_echo_client(const std::vector<Segment>& segments) {
    auto replies = std::make_shared<std::unordered_map<std::string, std::string>>();
    for (const auto& s : segments) {
        interpreter::VitalEstimate e;
        e.hr = s.ref_hr;
        e.spo2 = s.ref_spo2;
        e.activity = std::string(dsp::to_string(s.truth));
        replies->emplace(interpreter::build_prompt(s.burst), interpreter::serialize_reply(e));
    }
    return std::make_unique<interpreter::FunctionModelClient>(
        [replies](const std::string& prompt, const interpreter::ModelParams&) -> std::string {
            const auto it = replies->find(prompt);
            if (it == replies->end()) throw ClientUnavailable("no reference for this burst");
            return it->second;
        });
}

ordered_json to_json(const ComparisonReport& report) {
    using Ref = PublishedReference;
    ordered_json j;
    j["client"] = report.client;
    j["recordings"] = report.recordings;
    j["segments"] = report.segments.size();
    std::size_t failures = 0;
    for (const auto& r : report.segments) failures += r.llm_error.has_value();
    j["llm_failures"] = failures;
    j["methods"]["conventional"] = summary_json(report.conventional, true);
    j["methods"]["llm"] = summary_json(report.llm, true);
    ordered_json ref;
    ref["traces"] = Ref::traces;
    ref["conventional"] = {{"hr_mae", Ref::conventional_hr_mae},
                           {"spo2_mae", Ref::conventional_spo2_mae},
                           {"availability_pct", Ref::conventional_availability_pct},
                           {"activity_accuracy_pct", Ref::conventional_activity_pct}};
    ref["llm"] = {{"hr_mae", Ref::llm_hr_mae},
                  {"spo2_mae", Ref::llm_spo2_mae},
                  {"availability_pct", Ref::llm_availability_pct},
                  {"activity_accuracy_pct", Ref::llm_activity_pct}};
    j["published_reference"] = ref;
    ordered_json subjects = ordered_json::array();
    for (const auto& s : report.subjects) {
        subjects.push_back({{"subject_id", s.subject_id},
                            {"segments", s.segments},
                            {"conventional", summary_json(s.conventional, false)},
                            {"llm", summary_json(s.llm, false)}});
    }
    j["subjects"] = subjects;
    j["missing_channels"] = report.missing_channels;
    return j;
}

std::string per_subject_deltas_csv(const ComparisonReport& report) {
    std::string out =
        "subject_id,segments,conventional_hr_mae,llm_hr_mae,hr_mae_delta,conventional_spo2_mae,llm_spo2_mae,"
        "spo2_mae_delta\n";
    auto delta = [](const std::optional<double>& a, const std::optional<double>& b) {
        return a && b ? std::optional(*b - *a) : std::nullopt;
    };
    for (const auto& s : report.subjects) {
        out += s.subject_id + ',' + std::to_string(s.segments) + ',' + fmt(s.conventional.hr_mae) + ',' +
               fmt(s.llm.hr_mae) + ',' + fmt(delta(s.conventional.hr_mae, s.llm.hr_mae)) + ',' +
               fmt(s.conventional.spo2_mae) + ',' + fmt(s.llm.spo2_mae) + ',' +
               fmt(delta(s.conventional.spo2_mae, s.llm.spo2_mae)) + '\n';
    }
    return out;
}

std::string error_density_csv(const ComparisonReport& report) {
    struct Series {
        const char* method;
        const char* metric;
        double lo, width;
        std::vector<double> errors;
    };
    Series series[] = {{"conventional", "hr", -60.0, 2.0, {}},
                       {"llm", "hr", -60.0, 2.0, {}},
                       {"conventional", "spo2", -15.0, 0.5, {}},
                       {"llm", "spo2", -15.0, 0.5, {}}};
    for (const auto& r : report.segments) {
        if (r.ref_hr && r.conventional.hr_valid && r.conventional.hr_bpm) {
            series[0].errors.push_back(*r.conventional.hr_bpm - *r.ref_hr);
        }
        if (r.ref_hr && r.llm.hr) series[1].errors.push_back(*r.llm.hr - *r.ref_hr);
        if (r.ref_spo2 && r.conventional.spo2_valid && r.conventional.spo2_pct) {
            series[2].errors.push_back(*r.conventional.spo2_pct - *r.ref_spo2);
        }
        if (r.ref_spo2 && r.llm.spo2) series[3].errors.push_back(*r.llm.spo2 - *r.ref_spo2);
    }
    std::string out = "method,metric,bin_lo,bin_hi,density\n";
    for (const auto& s : series) {
        const auto h = density_histogram(s.errors, s.lo, s.width, 60);
        for (std::size_t i = 0; i < h.density.size(); ++i) {
            const double lo = s.lo + static_cast<double>(i) * s.width;
            out += std::string(s.method) + ',' + s.metric + ',' + fmt(lo) + ',' + fmt(lo + s.width) + ',' +
                   fmt(h.density[i]) + '\n';
        }
    }
    return out;
}

std::string confusion_csv(const ComparisonReport& report) {
    std::string out = "method,truth,predicted,count\n";
    for (const auto& [name, m] : {std::pair{"conventional", &report.conventional}, std::pair{"llm", &report.llm}}) {
        for (auto t : kLabels) {
            for (auto p : kLabels) {
                out += std::string(name) + ',' + std::string(dsp::to_string(t)) + ',' + std::string(dsp::to_string(p)) +
                       ',' + std::to_string(m->confusion.counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)]) +
                       '\n';
            }
        }
    }
    return out;
}

std::string estimates_csv(const ComparisonReport& report) {
    std::string out =
        "subject_id,activity,window,ref_hr,ref_spo2,conventional_hr,conventional_spo2,conventional_valid,"
        "conventional_activity,llm_hr,llm_spo2,llm_activity,llm_error\n";
    for (const auto& r : report.segments) {
        const auto& c = r.conventional;
        std::string error = r.llm_error.value_or("");
        std::replace(error.begin(), error.end(), ',', ';');
        std::replace(error.begin(), error.end(), '\n', ' ');
        out += r.subject_id + ',' + r.activity_name + ',' + std::to_string(r.window) + ',' + fmt(r.ref_hr) + ',' +
               fmt(r.ref_spo2) + ',' + fmt(c.hr_valid ? c.hr_bpm : std::nullopt) + ',' +
               fmt(c.spo2_valid ? c.spo2_pct : std::nullopt) + ',' + (c.valid() ? "1" : "0") + ',' +
               std::string(dsp::to_string(r.conventional_activity)) + ',' + fmt(r.llm.hr) + ',' + fmt(r.llm.spo2) +
               ',' + r.llm.activity.value_or("") + ',' + error + '\n';
    }
    return out;
}

void write_report(const ComparisonReport& report, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    auto write = [&](const char* name, const std::string& text) {
        std::ofstream out(out_dir / name, std::ios::binary | std::ios::trunc);
        out << text;
        if (!out) throw StorageFailure("cannot write " + (out_dir / name).string());
    };
    write("report.json", to_json(report).dump(2) + '\n');
    write("per_subject_deltas.csv", per_subject_deltas_csv(report));
    write("error_density.csv", error_density_csv(report));
    write("confusion.csv", confusion_csv(report));
}

}  // namespace vitalink::eval
