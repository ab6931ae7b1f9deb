#include "vitalink/orchestrator/context.hpp"

#include <cstdio>

#include "vitalink/clock.hpp"
#include "vitalink/orchestrator/agent_output.hpp"
#include "vitalink/orchestrator/prompts.hpp"

namespace vitalink::orchestrator {

namespace {

std::string fmt1(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", v);
    return buf;
}

std::string one_line(std::string s) {
    for (auto& c : s) {
        if (c == '\n' || c == '\r') c = ' ';
    }
    return s;
}

template <typename T>
std::vector<T> tail(std::vector<T> v, std::size_t n) {
    if (v.size() > n) v.erase(v.begin(), v.end() - static_cast<std::ptrdiff_t>(n));
    return v;
}

std::string history_line(const MessageRecord& m) {
    const auto& e = m.envelope;
    const bool inbound = e.value("direction", "inbound") == "inbound";
    std::string text = e.value("body", "");
    if (e.value("kind", "text") == "image") text = "[chart] " + text;
    if (e.value("kind", "text") == "audio" && text.empty()) text = "[voice message]";
    return "- " + format_utc(e.value("ts", std::int64_t{0})) + (inbound ? " user: " : " assistant: ") +
           one_line(text);
}

const char* kMinimalGuidance =
    "Answer briefly and directly in one or two short messages. Use the user's data only when the "
    "question needs it.";

const char* kDetailedGuidance[] = {
    "Ground every statement about the user's data in the recent metrics and their timestamps.",
    "Point out changes over time and any readings outside the user's thresholds.",
    "This is a wellness aid: do not diagnose, and suggest contacting a doctor when readings or "
    "symptoms warrant it.",
    "Set URGENCY to urgent only when the user may need prompt attention.",
    "Split longer answers into several short messages and offer useful follow-up questions.",
};

std::string task_line(const TaskSpec& t) {
    if (t.task == "daily_summary") {
        return "Summarize the user's readings since the previous summary and note anything unusual.";
    }
    if (t.task == "no_data_check") return "Ask the user to check their band, which has stopped sending data.";
    if (t.task == "medication_reminder") return "Remind the user about the payload below.";
    return "Reply to the user's message.";
}

}  // namespace

std::string metrics_line(const interpreter::VitalEstimate& e) {
    std::string s = "- " + format_utc(e.burst_ts);
    if (e.hr) s += " hr=" + fmt1(*e.hr);
    if (e.spo2) s += " spo2=" + fmt1(*e.spo2);
    if (e.activity) s += " activity=" + *e.activity;
    if (e.temp_body) s += " temp_body=" + fmt1(*e.temp_body);
    if (e.temp_ambient) s += " temp_ambient=" + fmt1(*e.temp_ambient);
    s += " source=" + std::string(interpreter::to_string(e.source));
    return s;
}

std::string ContextBundle::render() const {
    const std::vector<std::string>* sections[] = {&conversational_history, &long_term_memory,
                                                  &recent_metrics,         &profile,
                                                  &temporal_context,       &task_instructions,
                                                  &output_schema_spec};
    std::string out;
    for (std::size_t i = 0; i < prompts::kSections.size(); ++i) {
        if (i) out += "\n";
        out += prompts::kSections[i];
        out += "\n";
        if (sections[i]->empty()) out += "(none)\n";
        for (const auto& line : *sections[i]) out += line + "\n";
    }
    return out;
}

ContextBundle assemble_context(const Store& store, const UserProfile& user, std::int64_t now,
                               const TaskSpec& task, PromptDepth depth, const ContextWindows& windows,
                               const std::vector<agent_tools::KnowledgePassage>& passages) {
    const bool detailed = depth == PromptDepth::Detailed;
    ContextBundle b;

    const auto history =
        tail(store.messages(user.phone), detailed ? windows.history_turns : windows.minimal_history_turns);
    for (const auto& m : history) b.conversational_history.push_back(history_line(m));

    for (const auto& ev : store.memory(user.phone)) {
        if (ev.kind != MemoryKind::UrgentAlert) continue;
        b.long_term_memory.push_back("- " + format_utc(ev.ts) + " urgent_alert: " + one_line(ev.summary));
    }

    const auto vitals = tail(store.vitals(user.phone, 0, now), detailed ? windows.metrics : windows.minimal_metrics);
    for (const auto& v : vitals) b.recent_metrics.push_back(metrics_line(v.estimate));

    b.profile.push_back("name: " + user.name.value_or("unknown"));
    if (user.age) b.profile.push_back("age: " + std::to_string(*user.age));
    if (user.bmi) b.profile.push_back("bmi: " + fmt1(*user.bmi));
    if (user.medical_background) b.profile.push_back("medical_background: " + one_line(*user.medical_background));
    if (user.demographic) b.profile.push_back("demographic: " + one_line(*user.demographic));
    const auto& th = user.thresholds;
    b.profile.push_back("thresholds: hr " + fmt1(th.hr_low) + "-" + fmt1(th.hr_high) + " BPM over " +
                        std::to_string(th.hr_sustain) + " readings, spo2 below " + fmt1(th.spo2_low) +
                        " %, temp_body above " + fmt1(th.temp_high) + " C");

    b.temporal_context.push_back("current_time: " + format_utc(now));
    if (!vitals.empty()) {
        const auto last = static_cast<std::int64_t>(vitals.back().estimate.burst_ts);
        b.temporal_context.push_back("latest_reading: " + format_utc(last) + " (" +
                                     std::to_string((now - last) / 60) + " minutes ago)");
    } else {
        b.temporal_context.push_back("latest_reading: none");
    }
    b.temporal_context.push_back("member_since: " + format_utc(user.created_at));
    b.temporal_context.push_back("All timestamps are UTC.");

    b.task_instructions.push_back(std::string(prompts::kTaskLabel) + task.task);
    if (!task.user_message.empty()) {
        b.task_instructions.push_back(std::string(prompts::kUserMessageLabel) + one_line(task.user_message));
    }
    if (!task.payload.empty()) b.task_instructions.push_back("Payload: " + one_line(task.payload));
    b.task_instructions.push_back(task_line(task));
    if (detailed) {
        for (const char* g : kDetailedGuidance) b.task_instructions.emplace_back(g);
    } else {
        b.task_instructions.emplace_back(kMinimalGuidance);
    }
    if (!passages.empty()) {
        b.task_instructions.emplace_back("Reference passages:");
        for (const auto& p : passages) {
            std::string text = one_line(p.text);
            if (text.size() > 400) text = text.substr(0, 400) + "...";
            b.task_instructions.push_back("- [" + std::string(agent_tools::to_string(p.source)) + ":" +
                                          p.doc_id + "] " + text);
        }
    }

    std::string spec(orchestrator::output_schema_spec());
    for (std::size_t start = 0; start <= spec.size();) {
        const auto nl = spec.find('\n', start);
        b.output_schema_spec.push_back(spec.substr(start, nl == std::string::npos ? nl : nl - start));
        if (nl == std::string::npos) break;
        start = nl + 1;
    }
    return b;
}

}  // namespace vitalink::orchestrator
