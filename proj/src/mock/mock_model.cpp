#include "vitalink/mock/mock_model.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <optional>
#include <regex>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vitalink/dsp/activity.hpp"
#include "vitalink/dsp/conventional.hpp"
#include "vitalink/interpreter/interpreter.hpp"
#include "vitalink/orchestrator/prompts.hpp"
#include "vitalink/router/router.hpp"
#include "vitalink/wire/burst.hpp"

namespace vitalink::mock {

namespace {

namespace pr = orchestrator::prompts;
using nlohmann::ordered_json;

double mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / double(v.size());
}

double rms_ac(const std::vector<double>& v, double m) {
    double acc = 0.0;
    for (double x : v) acc += (x - m) * (x - m);
    return v.empty() ? 0.0 : std::sqrt(acc / double(v.size()));
}

double round1(double v) { return std::round(v * 10.0) / 10.0; }

double dtft_power(const std::vector<double>& x, double m, double f, double fs) {
    const std::complex<double> step = std::polar(1.0, -2.0 * std::numbers::pi * f / fs);
    std::complex<double> w = 1.0, acc = 0.0;
    for (double v : x) {
        acc += (v - m) * w;
        w *= step;
    }
    return std::norm(acc);
}

// Coarse grid, then a fine grid around the coarse maximum.
double spectral_peak_hz(const std::vector<double>& x, double fs, double lo, double hi) {
    const double m = mean(x);
    auto scan = [&](double a, double b, double step) {
        double best_f = a, best_p = -1.0;
        for (double f = a; f <= b + 1e-12; f += step) {
            const double p = dtft_power(x, m, f, fs);
            if (p > best_p) best_p = p, best_f = f;
        }
        return best_f;
    };
    const double coarse = scan(lo, hi, 0.02);
    return scan(std::max(lo, coarse - 0.02), std::min(hi, coarse + 0.02), 0.0005);
}

bool all_zero(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x == 0.0; });
}

std::string_view verbose_for(dsp::ActivityLabel label) {
    switch (label) {
        case dsp::ActivityLabel::Sit: return "The user appears to be sitting or resting quietly.";
        case dsp::ActivityLabel::Walk: return "The user seems to be walking at a steady pace.";
        case dsp::ActivityLabel::Run: return "The user looks to be running or exercising vigorously.";
    }
    return "";
}

std::optional<std::string> line_after(std::string_view text, std::string_view label) {
    const auto pos = text.find(label);
    if (pos == std::string_view::npos) return std::nullopt;
    const auto start = pos + label.size();
    const auto end = text.find('\n', start);
    return std::string(text.substr(start, end == std::string_view::npos ? end : end - start));
}

std::string_view section(std::string_view prompt, std::string_view marker) {
    const auto pos = prompt.find(marker);
    if (pos == std::string_view::npos) return {};
    const auto start = pos + marker.size();
    const auto next = prompt.find("\n### ", start);
    return prompt.substr(start, next == std::string_view::npos ? next : next - start);
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool mentions(const std::string& text, std::initializer_list<std::string_view> words) {
    return std::any_of(words.begin(), words.end(),
                       [&](std::string_view w) { return text.find(w) != std::string::npos; });
}

struct MetricPoint {
    std::optional<double> hr, spo2, temp_body;
    std::string activity;
};

std::optional<double> metric_value(const std::string& line, const std::string& key) {
    const std::regex re("(?:^| )" + key + "=([0-9.]+)");
    std::smatch m;
    if (std::regex_search(line, m, re)) return std::stod(m[1]);
    return std::nullopt;
}

std::vector<MetricPoint> parse_metrics(std::string_view body) {
    std::vector<MetricPoint> out;
    std::size_t start = 0;
    while (start < body.size()) {
        auto end = body.find('\n', start);
        if (end == std::string_view::npos) end = body.size();
        const std::string line(body.substr(start, end - start));
        start = end + 1;
        if (!line.starts_with("- ")) continue;
        MetricPoint p;
        p.hr = metric_value(line, "hr");
        p.spo2 = metric_value(line, "spo2");
        p.temp_body = metric_value(line, "temp_body");
        static const std::regex act(" activity=([a-z_]+)");
        std::smatch m;
        if (std::regex_search(line, m, act)) p.activity = m[1];
        out.push_back(std::move(p));
    }
    return out;
}

std::string fmt1(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

template <typename F>
std::optional<double> average(const std::vector<MetricPoint>& pts, F get) {
    double sum = 0.0;
    int n = 0;
    for (const auto& p : pts) {
        if (auto v = get(p)) sum += *v, ++n;
    }
    if (n == 0) return std::nullopt;
    return sum / n;
}

std::string agent_reply(std::string_view prompt) {
    const std::string task = line_after(section(prompt, pr::kTask), pr::kTaskLabel).value_or("reply");
    const std::string message = line_after(section(prompt, pr::kTask), pr::kUserMessageLabel).value_or("");
    const std::string name = line_after(section(prompt, pr::kProfile), "name: ").value_or("there");
    const auto points = parse_metrics(section(prompt, pr::kMetrics));
    const std::string msg = lower(message);

    ordered_json out;
    out["PERSONAL"] = false;
    out["IMAGE"] = nullptr;
    out["URGENCY"] = "not_urgent";
    std::vector<std::string> responses;
    std::vector<std::string> questions = {"Show my latest vitals", "Summarize my week"};

    auto latest_line = [&]() -> std::string {
        if (points.empty()) return "I don't have any readings from your band yet.";
        const auto& p = points.back();
        std::string s = "Your latest reading:";
        s += "\nHeart rate: " + (p.hr ? fmt1(*p.hr) + " BPM" : std::string("not available"));
        s += "\nSpO2: " + (p.spo2 ? fmt1(*p.spo2) + " %" : std::string("not available"));
        if (!p.activity.empty()) s += "\nActivity: " + p.activity;
        return s;
    };
    auto summary_line = [&]() -> std::string {
        if (points.empty()) return "There is no data to summarize yet.";
        std::string s = "Summary of your last " + std::to_string(points.size()) + " readings:";
        if (auto hr = average(points, [](const MetricPoint& p) { return p.hr; })) {
            s += "\nAverage heart rate: " + fmt1(*hr) + " BPM";
        }
        if (auto sp = average(points, [](const MetricPoint& p) { return p.spo2; })) {
            s += "\nAverage SpO2: " + fmt1(*sp) + " %";
        }
        return s;
    };

    if (task == "daily_summary") {
        responses = {"Good morning, " + name + "!", summary_line()};
    } else if (task == "no_data_check") {
        responses = {"Hi " + name + ", I haven't received data from your band for a while. "
                     "Could you check that it is charged and paired?"};
        questions = {"My band is charged", "Pause uploads"};
    } else if (task == "medication_reminder") {
        responses = {"Reminder: " + line_after(section(prompt, pr::kTask), "Payload: ").value_or("take your medication") + "."};
        questions = {"Done", "Remind me later"};
    } else if (router::classify(message) == router::Tier::HighRisk) {
        out["URGENCY"] = "urgent";
        out["PERSONAL"] = true;
        responses = {"I'm sorry you're feeling this way, " + name + ".", latest_line(),
                     "If symptoms are severe or getting worse, please contact emergency services "
                     "or a doctor right away."};
        questions = {"Call my emergency contact", "Show my heart rate chart"};
    } else if (mentions(msg, {"chart", "plot", "graph", "trend"})) {
        std::string metric = "hr";
        if (mentions(msg, {"spo2", "oxygen"})) metric = "spo2";
        if (mentions(msg, {"temperature", "temp"})) metric = "temp_body";
        out["IMAGE"] = {{"metric", metric}, {"hours", 24}, {"kind", "line"}};
        responses = {"Here is your " + metric + " chart for the last 24 hours."};
    } else if (mentions(msg, {"summar", "week", "average"})) {
        responses = {summary_line()};
    } else if (mentions(msg, {"heart", "hr", "vital", "spo2", "oxygen", "pulse", "reading"})) {
        responses = {latest_line()};
        questions = {"Show my heart rate chart", "Summarize my week"};
    } else if (msg.empty() || msg.starts_with("hi") || msg.starts_with("hello") ||
               msg.starts_with("hey") || msg.starts_with("good morning")) {
        responses = {"Hi " + name + "! How can I help you today?"};
    } else {
        responses = {"Thanks for your message, " + name + ". I'm keeping an eye on your readings.",
                     "Ask me about your heart rate, SpO2 or activity at any time."};
    }
    out["RESPONSES"] = responses;
    out["QUESTIONS"] = questions;
    return out.dump();
}

std::string profile_reply(std::string_view prompt) {
    const std::string reply = line_after(prompt, pr::kReplyLabel).value_or("");
    ordered_json out;
    out["name"] = nullptr;
    out["age"] = nullptr;
    out["bmi"] = nullptr;
    out["medical_background"] = nullptr;
    out["demographic"] = nullptr;
    std::smatch m;
    static const std::regex name_re(
        R"((?:[Mm]y name is|[Cc]all me|I am|I'm|[Nn]ame:?)\s+([A-Z][a-zA-Z\-]+))");
    static const std::regex age_re(R"((?:i am|i'm|age(?: is)?|aged)\s+(\d{1,3})\b|\b(\d{1,3})\s*(?:years?|yrs?|y/o)|,\s*(\d{1,3})\s*$)",
                                   std::regex::icase);
    static const std::regex bmi_re(R"(bmi(?: is| of)?\s*:?\s*(\d{1,2}(?:\.\d+)?))", std::regex::icase);
    static const std::regex med_re(R"((?:i have|diagnosed with)\s+([^.,;]+))", std::regex::icase);
    if (std::regex_search(reply, m, age_re)) {
        out["age"] = std::stoi(m[1].matched ? m[1].str() : m[2].matched ? m[2].str() : m[3].str());
    }
    if (std::regex_search(reply, m, name_re)) {
        const std::string candidate = m[1];
        if (!std::isdigit(static_cast<unsigned char>(candidate[0]))) out["name"] = candidate;
    }
    if (std::regex_search(reply, m, bmi_re)) out["bmi"] = std::stod(m[1]);
    if (std::regex_search(reply, m, med_re)) out["medical_background"] = m[1].str();
    return out.dump();
}

}  // namespace

std::string interpret_prompt(const std::string& prompt) {
    const auto ch = interpreter::parse_prompt_channels(prompt);
    ordered_json out;
    const bool ppg_ok = ch.ir.size() >= 8 && ch.red.size() == ch.ir.size() && !all_zero(ch.ir) &&
                        !all_zero(ch.red);
    const double ir_dc = mean(ch.ir), red_dc = mean(ch.red);
    const double ir_ac = rms_ac(ch.ir, ir_dc), red_ac = rms_ac(ch.red, red_dc);
    if (ppg_ok && ir_ac > 0.0) {
        out["hr"] = round1(60.0 * spectral_peak_hz(ch.ir, wire::kPpgRateHz, 0.5, 3.5));
    } else {
        out["hr"] = "N/A";
    }
    if (ppg_ok && ir_ac > 0.0 && red_ac > 0.0 && ir_dc > 0.0 && red_dc > 0.0) {
        const double r = (red_ac / red_dc) / (ir_ac / ir_dc);
        out["spo2"] = round1(dsp::spo2_from_ratio(r));
    } else {
        out["spo2"] = "N/A";
    }
    const bool accel_ok = !ch.a_x.empty() && ch.a_x.size() == ch.a_y.size() &&
                          ch.a_x.size() == ch.a_z.size() &&
                          !(all_zero(ch.a_x) && all_zero(ch.a_y) && all_zero(ch.a_z));
    if (accel_ok) {
        const dsp::ActivityThresholds th;
        auto g = [&](const std::vector<double>& v) {
            std::vector<double> o(v.size());
            std::transform(v.begin(), v.end(), o.begin(), [&](double c) { return c / th.counts_per_g; });
            return o;
        };
        const auto label = dsp::classify_activity_baseline(g(ch.a_x), g(ch.a_y), g(ch.a_z), th);
        out["activity"] = std::string(dsp::to_string(label));
        out["activity_verbose"] = std::string(verbose_for(label));
    } else {
        out["activity"] = "N/A";
        out["activity_verbose"] = "N/A";
    }
    if (!ch.body.empty() && !all_zero(ch.body)) {
        out["temp_body"] = round1(mean(ch.body) + kWristToCoreOffsetC);
    } else {
        out["temp_body"] = "N/A";
    }
    if (!ch.ambient.empty() && !all_zero(ch.ambient)) {
        out["temp_ambient"] = round1(mean(ch.ambient));
    } else {
        out["temp_ambient"] = "N/A";
    }
    return out.dump();
}

std::string MockModelClient::complete(const std::string& prompt, const interpreter::ModelParams&) {
    if (prompt.starts_with(interpreter::instruction_block())) return interpret_prompt(prompt);
    if (prompt.starts_with(pr::kQcReview)) {
        return R"({"verdict":"approve","reason":"Draft is factual, non-diagnostic and actionable."})";
    }
    if (prompt.starts_with(pr::kProfileExtraction)) return profile_reply(prompt);
    if (prompt.starts_with("### Query Classification")) {
        const auto q = line_after(prompt, "Query: ").value_or("");
        return std::string(router::to_string(router::classify(q)));
    }
    if (prompt.find(pr::kSchema) != std::string::npos) return agent_reply(prompt);
    return "I can only answer prompts produced by this system.";
}

}  // namespace vitalink::mock
