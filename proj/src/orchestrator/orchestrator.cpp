#include "vitalink/orchestrator/orchestrator.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "vitalink/agent_tools/cron.hpp"
#include "vitalink/agent_tools/tools.hpp"
#include "vitalink/error.hpp"
#include "vitalink/orchestrator/prompts.hpp"

namespace vitalink::orchestrator {

using gateway::ChatEnvelope;
using nlohmann::json;

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

std::string trimmed_lower(std::string_view s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string_view::npos) return {};
    const auto b = s.find_last_not_of(" \t\r\n");
    std::string out(s.substr(a, b - a + 1));
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

bool asks_for_summary(const std::string& text) {
    const auto t = trimmed_lower(text);
    return t.find("summar") != std::string::npos || t.find("overview") != std::string::npos ||
           t.find("report") != std::string::npos;
}

double usd(const std::map<std::string, std::size_t>& tokens, const router::PriceTable& prices) {
    double total = 0.0;
    for (const auto& [model, n] : tokens) total += static_cast<double>(n) / 1000.0 * prices.price(model);
    return total;
}

const char* kApology = "Sorry, I couldn't put together a proper answer just now. Please try again in a moment.";
const char* kSafeUrgentReply =
    "I can't give a reliable answer to that here. If you feel unwell or your symptoms are getting "
    "worse, please contact a doctor or emergency services right away.";

}  // namespace

std::string_view to_string(QcVerdict v) {
    switch (v) {
        case QcVerdict::Approve: return "approve";
        case QcVerdict::Revise: return "revise";
        case QcVerdict::Reject: return "reject";
    }
    return "approve";
}

std::string qc_prompt(const std::string& draft, const std::vector<std::string>& evidence) {
    std::string p(prompts::kQcReview);
    p += "\nYou review an urgent message before it is sent to a wearable user.\n"
         "Approve it if it is accurate for the readings below, calm, non-diagnostic and tells the user "
         "what to do next. Revise it if a better wording fixes a problem. Reject it if it should not be "
         "sent at all.\n"
         "Reply with one JSON object: {\"verdict\": \"approve\" | \"revise\" | \"reject\", "
         "\"reason\": string, \"revised\": string (only for revise)}.\n"
         "Evidence:\n";
    for (const auto& e : evidence) p += e + "\n";
    p += std::string(prompts::kDraftLabel) + one_line(draft) + "\n";
    return p;
}

QcResult parse_qc_reply(std::string_view text) {
    const json j = json::parse(interpreter::strip_code_fence(text), nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("verdict") || !j["verdict"].is_string()) {
        throw MalformedReply("QC reply lacks a verdict");
    }
    QcResult r;
    const auto v = j["verdict"].get<std::string>();
    if (v == "approve") {
        r.verdict = QcVerdict::Approve;
    } else if (v == "revise") {
        r.verdict = QcVerdict::Revise;
    } else if (v == "reject") {
        r.verdict = QcVerdict::Reject;
    } else {
        throw MalformedReply("unknown QC verdict " + v);
    }
    if (j.contains("reason") && j["reason"].is_string()) r.reason = j["reason"].get<std::string>();
    if (j.contains("revised") && j["revised"].is_string()) r.revised = j["revised"].get<std::string>();
    if (r.verdict == QcVerdict::Revise && r.revised.empty()) throw MalformedReply("revise without text");
    return r;
}

std::string profile_extraction_prompt(const std::string& reply) {
    std::string p(prompts::kProfileExtraction);
    p += "\nExtract the profile fields the user states in the reply below. Return one JSON object with "
         "keys name, age, bmi, medical_background and demographic; use null for anything not stated.\n";
    p += std::string(prompts::kReplyLabel) + one_line(reply) + "\n";
    return p;
}

std::vector<AlertReason> evaluate_thresholds(const Store& store, const UserProfile& user,
                                             const StoredVital& latest) {
    std::vector<AlertReason> out;
    const auto& th = user.thresholds;
    const auto& e = latest.estimate;

    auto history = store.vitals(user.phone, 0, e.burst_ts);
    // Only readings stored up to this one count towards the sustained window.
    std::erase_if(history, [&](const StoredVital& v) {
        return v.estimate.burst_ts == e.burst_ts && v.seq > latest.seq;
    });
    const auto n = static_cast<std::size_t>(th.hr_sustain);
    if (history.size() >= n) {
        bool all_high = true, all_low = true;
        for (auto it = history.end() - static_cast<std::ptrdiff_t>(n); it != history.end(); ++it) {
            const auto& hr = it->estimate.hr;
            all_high = all_high && hr && *hr > th.hr_high;
            all_low = all_low && hr && *hr < th.hr_low;
        }
        const std::string span = n == 1 ? std::string("in your latest reading")
                                                          : "for your last " + std::to_string(n) + " readings";
        if (all_high) {
            out.push_back({"hr_high", "Your heart rate has been above " + fmt1(th.hr_high) + " BPM " + span +
                                          " (latest " + fmt1(*e.hr) + " BPM)."});
        }
        if (all_low) {
            out.push_back({"hr_low", "Your heart rate has been below " + fmt1(th.hr_low) + " BPM " + span +
                                         " (latest " + fmt1(*e.hr) + " BPM)."});
        }
    }
    if (e.spo2 && *e.spo2 < th.spo2_low) {
        out.push_back({"spo2_low", "Your blood oxygen reading is " + fmt1(*e.spo2) + " %, below your " +
                                       fmt1(th.spo2_low) + " % alert level."});
    }
    if (e.temp_body && *e.temp_body > th.temp_high) {
        out.push_back({"temp_high", "Your estimated body temperature is " + fmt1(*e.temp_body) +
                                        " C, above your " + fmt1(th.temp_high) + " C alert level."});
    }
    return out;
}

Orchestrator::Orchestrator(Store& store, interpreter::ModelClient& model, Dispatcher& dispatcher,
                           const Clock& clock, OrchestratorConfig config)
    : store_(store),
      model_(model),
      dispatcher_(dispatcher),
      clock_(clock),
      config_(std::move(config)),
      classifier_(std::make_shared<router::HeuristicClassifier>(config_.router.rules)) {
    config_.prices.validate();
    config_.interpreter_params.validate();
    config_.default_thresholds.validate();
    agent_tools::CronExpr::parse(config_.no_data_cron);
}

std::mutex& Orchestrator::user_mutex(const std::string& phone) {
    std::lock_guard lock(users_mutex_);
    auto& m = user_mutexes_[phone];
    if (!m) m = std::make_unique<std::mutex>();
    return *m;
}

void Orchestrator::audit(const std::string& phone, const std::string& event, json details) {
    store_.append_audit({.ts = clock_.now(), .phone = phone, .event = event, .details = std::move(details)});
}

std::vector<ChatEnvelope> Orchestrator::say(const std::string& phone, std::vector<std::string> responses,
                                            std::vector<std::string> questions,
                                            const std::optional<std::string>& reply_to) {
    AgentOutput out;
    out.responses = std::move(responses);
    out.questions = std::move(questions);
    return dispatcher_.deliver(phone, out, reply_to);
}

// --- sensor path -----------------------------------------------------------

SensorOutcome Orchestrator::handle_sensor_burst(const wire::SensorBurst& burst, bool anomaly_flag) {
    const auto user = store_.user_by_device(burst.device_id);
    if (!user) throw UnknownDevice(burst.device_id);
    // The model call runs outside the user's lock; only persistence and
    // evaluation are serialized.
    const auto interpreted =
        interpreter::interpret_with_fallback(burst, model_, config_.interpreter_params, config_.interpret);

    std::lock_guard lock(user_mutex(user->phone));
    SensorOutcome outcome;
    outcome.status = interpreted.status;
    outcome.stored = store_.append_vital(user->phone, interpreted.estimate, !anomaly_flag, anomaly_flag);
    if (interpreted.status != interpreter::InterpretStatus::Llm) {
        audit(user->phone, "interpret_" + std::string(interpreter::to_string(interpreted.status)),
              {{"burst_ts", burst.ts}, {"error", interpreted.error}});
    }
    if (anomaly_flag) {
        const auto evaluated = evaluate_locked(*store_.user(user->phone), outcome.stored);
        outcome.evaluated = true;
        outcome.urgency = evaluated.urgency;
        outcome.reasons = evaluated.reasons;
        outcome.qc = evaluated.qc;
        outcome.sent = evaluated.sent;
    }
    return outcome;
}

std::vector<SensorOutcome> Orchestrator::evaluate_pending() {
    std::vector<SensorOutcome> out;
    for (const auto& v : store_.pending_vitals()) {
        std::lock_guard lock(user_mutex(v.phone));
        const auto user = store_.user(v.phone);
        if (!user) continue;  // deleted since upload
        auto evaluated = evaluate_locked(*user, v);
        store_.mark_evaluated(v.seq);
        evaluated.stored = v;
        evaluated.stored.pending_evaluation = false;
        out.push_back(std::move(evaluated));
    }
    return out;
}

SensorOutcome Orchestrator::evaluate_locked(const UserProfile& user, const StoredVital& stored) {
    SensorOutcome outcome;
    outcome.stored = stored;
    outcome.evaluated = true;
    auto reasons = evaluate_thresholds(store_, user, stored);
    if (reasons.empty()) return outcome;
    // Urgency reflects the reading; the cooldown only withholds the message.
    outcome.urgency = Urgency::Urgent;
    outcome.reasons = reasons;

    const std::int64_t now = clock_.now();
    {
        std::lock_guard lock(alerts_mutex_);
        std::vector<AlertReason> fresh;
        for (auto& r : reasons) {
            auto it = last_alert_.find({user.phone, r.code});
            if (it != last_alert_.end() && now - it->second < config_.alert_cooldown_s) continue;
            last_alert_[{user.phone, r.code}] = now;
            fresh.push_back(std::move(r));
        }
        reasons = std::move(fresh);
    }
    if (reasons.empty()) {
        audit(user.phone, "alert_suppressed", {{"vital_seq", stored.seq}, {"reason", "cooldown"}});
        return outcome;
    }

    std::vector<std::string> texts;
    json codes = json::array();
    for (const auto& r : reasons) {
        texts.push_back(r.text);
        codes.push_back(r.code);
    }
    const std::string draft = "Health alert (" + format_utc(stored.estimate.burst_ts) + "): " + join(texts, " ") +
                              " If you feel unwell, rest and contact a doctor or emergency services.";
    std::vector<std::string> evidence;
    for (const auto& v : store_.vitals(user.phone, 0, stored.estimate.burst_ts)) {
        evidence.push_back(metrics_line(v.estimate));
    }
    if (evidence.size() > 5) evidence.erase(evidence.begin(), evidence.end() - 5);
    std::map<std::string, std::size_t> tokens;
    const auto qc = run_qc(user.phone, draft, evidence, "sensor_alert", &tokens);
    outcome.qc = qc;

    store_.append_memory({.phone = user.phone,
                          .ts = static_cast<std::int64_t>(stored.estimate.burst_ts),
                          .kind = MemoryKind::UrgentAlert,
                          .summary = join(texts, " "),
                          .linked_vitals = json::array({stored.seq})});
    store_.append_cost({.phone = user.phone,
                        .ts = now,
                        .tier = "qc",
                        .tokens_per_model = tokens,
                        .total_usd = usd(tokens, config_.prices)});

    if (qc.verdict == QcVerdict::Reject) {
        audit(user.phone, "alert_rejected", {{"vital_seq", stored.seq}, {"reasons", codes}, {"why", qc.reason}});
        return outcome;
    }
    const std::string text = qc.verdict == QcVerdict::Revise ? qc.revised : draft;
    outcome.sent = say(user.phone, {text}, {"Show my heart rate chart", "I feel fine"}, std::nullopt);
    audit(user.phone, "alert_delivered",
          {{"vital_seq", stored.seq}, {"reasons", codes}, {"message_id", outcome.sent.back().id}});
    return outcome;
}

QcResult Orchestrator::run_qc(const std::string& phone, const std::string& draft,
                              const std::vector<std::string>& evidence, const std::string& context,
                              std::map<std::string, std::size_t>* tokens) {
    const std::string prompt = qc_prompt(draft, evidence);
    interpreter::ModelParams params;
    params.model_name = config_.qc_model;
    QcResult result;
    std::string error;
    for (int attempt = 0; attempt < 2; ++attempt) {
        if (tokens) (*tokens)[config_.qc_model] += router::estimate_tokens(prompt);
        try {
            result = parse_qc_reply(model_.complete(prompt, params));
            error.clear();
            break;
        } catch (const Error& e) {
            error = e.what();
        }
    }
    if (!error.empty()) {
        // The reviewer could not be reached. The fixed templates are sent as
        // drafted, and the failed review is on record before delivery.
        result = {QcVerdict::Approve, "review unavailable: " + error, {}};
        audit(phone, "qc_unavailable", {{"context", context}, {"error", error}});
    }
    audit(phone, "qc_review",
          {{"context", context}, {"verdict", to_string(result.verdict)}, {"reason", result.reason},
           {"draft", draft}, {"revised", result.revised}});
    return result;
}

// --- user path -------------------------------------------------------------

bool Orchestrator::conversational_signup(const std::string& phone) {
    std::lock_guard lock(user_mutex(phone));
    auto user = store_.user(phone);
    if (!user) throw UnknownUser(phone);
    if (user->welcomed) return false;
    say(phone,
        {"Welcome to VitaLink! I'm your wellness assistant. I keep an eye on the readings from your band "
         "and answer questions about them.",
         "VitaLink is a wellness aid, not a diagnostic tool. To get started, what's your name and how old "
         "are you?"},
        {}, std::nullopt);
    user->welcomed = true;
    store_.put_user(*user);
    audit(phone, "welcome_sent");
    return true;
}

MessageOutcome Orchestrator::handle_user_message(const ChatEnvelope& envelope) {
    std::lock_guard lock(user_mutex(envelope.user_phone));
    auto user = store_.user(envelope.user_phone);
    if (!user) throw UnknownUser(envelope.user_phone);
    store_.append_message(user->phone, envelope);

    std::string text = envelope.body;
    if (envelope.kind == gateway::EnvelopeKind::Audio) {
        try {
            if (!transcriber_) throw TranscriptionFailure("no transcriber configured");
            text = transcriber_(envelope);
        } catch (const TranscriptionFailure& e) {
            audit(user->phone, "transcription_failed", {{"error", e.what()}});
            MessageOutcome out;
            out.path = MessageOutcome::Path::Apology;
            out.sent = say(user->phone, {"Sorry, I couldn't make out that voice message. Could you type it instead?"},
                           {}, envelope.id);
            return out;
        }
        audit(user->phone, "transcribed", {{"media_id", envelope.media_id.value_or("")}, {"text", text}});
    }

    if (auto out = command(*user, text, envelope.id)) return *out;
    if (!user->profile_complete) return signup_reply(*user, text, envelope.id);

    const auto tier = classifier_->classify(text);
    const auto depth = (tier == router::Tier::Simple && !asks_for_summary(text)) ? PromptDepth::Minimal
                                                                                : PromptDepth::Detailed;
    return agent_flow(*user, {.task = "reply", .user_message = text, .payload = {}}, tier, depth, envelope.id);
}

std::optional<MessageOutcome> Orchestrator::command(UserProfile user, const std::string& text,
                                                    const std::optional<std::string>& reply_to) {
    const auto t = trimmed_lower(text);
    if (t != "pause uploads" && t != "resume uploads") return std::nullopt;
    const bool pause = t == "pause uploads";
    user.preferences.uploads_paused = pause;
    store_.put_user(user);
    audit(user.phone, pause ? "uploads_paused" : "uploads_resumed");
    MessageOutcome out;
    out.path = MessageOutcome::Path::Command;
    out.sent = pause ? say(user.phone, {"Uploads are paused. Readings from your band won't be stored until you resume."},
                           {"Resume uploads"}, reply_to)
                     : say(user.phone, {"Uploads are back on. I'll keep an eye on your readings."}, {}, reply_to);
    return out;
}

MessageOutcome Orchestrator::signup_reply(UserProfile user, const std::string& text,
                                          const std::optional<std::string>& reply_to) {
    MessageOutcome out;
    out.path = MessageOutcome::Path::Signup;
    interpreter::ModelParams params;
    params.model_name = config_.extraction_model;
    const std::string prompt = profile_extraction_prompt(text);
    std::map<std::string, std::size_t> tokens{{config_.extraction_model, router::estimate_tokens(prompt)}};
    json fields;
    try {
        ++out.model_calls;
        fields = json::parse(interpreter::strip_code_fence(model_.complete(prompt, params)), nullptr, false);
    } catch (const Error& e) {
        audit(user.phone, "profile_extraction_failed", {{"error", e.what()}});
    }
    if (fields.is_object()) {
        json updated = json::array();
        auto str = [&](const char* key) -> std::optional<std::string> {
            if (!fields.contains(key) || !fields[key].is_string()) return std::nullopt;
            auto s = fields[key].get<std::string>();
            if (s.empty() || s.size() > 200) return std::nullopt;
            return s;
        };
        if (auto v = str("name"); v && v->size() <= 60) user.name = *v, updated.push_back("name");
        if (fields.contains("age") && fields["age"].is_number_integer()) {
            const int age = fields["age"].get<int>();
            if (age >= 1 && age <= 120) user.age = age, updated.push_back("age");
        }
        if (fields.contains("bmi") && fields["bmi"].is_number()) {
            const double bmi = fields["bmi"].get<double>();
            if (bmi >= 10.0 && bmi <= 80.0) user.bmi = bmi, updated.push_back("bmi");
        }
        if (auto v = str("medical_background")) user.medical_background = *v, updated.push_back("medical_background");
        if (auto v = str("demographic")) user.demographic = *v, updated.push_back("demographic");
        if (!updated.empty()) audit(user.phone, "profile_updated", {{"fields", updated}});
    } else if (!fields.is_null()) {
        audit(user.phone, "profile_extraction_failed", {{"error", "reply is not a JSON object"}});
    }
    store_.append_cost({.phone = user.phone,
                        .ts = clock_.now(),
                        .tier = "signup",
                        .tokens_per_model = tokens,
                        .total_usd = usd(tokens, config_.prices)});

    if (user.name && user.age) {
        user.profile_complete = true;
        store_.put_user(user);
        schedule_defaults(user);
        audit(user.phone, "profile_complete");
        out.sent = say(user.phone,
                       {"Thanks, " + *user.name + "! Your profile is set up.",
                        "I'll send you a daily summary and let you know if anything in your readings needs "
                        "attention. Ask me about your heart rate, SpO2 or activity at any time."},
                       {"Show my latest vitals", "Summarize my week"}, reply_to);
        return out;
    }
    store_.put_user(user);
    std::string ask;
    if (!user.name && !user.age) {
        ask = "Could you tell me your name and your age?";
    } else if (!user.name) {
        ask = "Thanks! What should I call you?";
    } else {
        ask = "Thanks, " + *user.name + "! How old are you?";
    }
    out.sent = say(user.phone, {ask}, {}, reply_to);
    return out;
}

MessageOutcome Orchestrator::agent_flow(const UserProfile& user, const TaskSpec& task, router::Tier tier,
                                        PromptDepth depth, const std::optional<std::string>& reply_to) {
    MessageOutcome out;
    out.path = MessageOutcome::Path::Agent;
    out.tier = tier;
    out.depth = depth;
    const std::int64_t now = clock_.now();

    std::vector<agent_tools::KnowledgePassage> passages;
    if (knowledge_ && depth == PromptDepth::Detailed && !task.user_message.empty() && knowledge_->size() > 0) {
        for (auto& p : knowledge_->retrieve(task.user_message, config_.rag_k)) {
            if (p.score > 0.0) passages.push_back(std::move(p));
        }
    }
    const auto bundle = assemble_context(store_, user, now, task, depth, config_.windows, passages);
    out.prompt = bundle.render();

    interpreter::ModelParams params;
    params.model_name = config_.router.tiers.model_for(tier);
    std::map<std::string, std::size_t> tokens;
    std::optional<AgentOutput> output;
    std::string prompt = out.prompt;
    for (int attempt = 0; attempt < 2 && !output; ++attempt) {
        ++out.model_calls;
        tokens[params.model_name] += router::estimate_tokens(prompt);
        try {
            output = enforce_schema(model_.complete(prompt, params));
        } catch (const Error& e) {
            audit(user.phone, "schema_violation", {{"attempt", attempt + 1}, {"error", e.what()}});
            prompt = out.prompt + "\n### Repair\nYour previous reply was rejected (" + one_line(e.what()) +
                     "). Reply again with only the JSON object described under " +
                     std::string(prompts::kSchema).substr(4) + ".\n";
        }
    }

    if (output && output->urgency == Urgency::Urgent) {
        std::vector<std::string> evidence;
        for (const auto& line : bundle.recent_metrics) evidence.push_back(line);
        if (evidence.size() > 5) evidence.erase(evidence.begin(), evidence.end() - 5);
        if (!task.user_message.empty()) evidence.push_back("User message: " + one_line(task.user_message));
        const auto qc = run_qc(user.phone, join(output->responses, " / "), evidence, "agent_reply", &tokens);
        if (qc.verdict == QcVerdict::Revise) {
            output->responses = {qc.revised};
        } else if (qc.verdict == QcVerdict::Reject) {
            audit(user.phone, "reply_rejected", {{"why", qc.reason}});
            output->responses = {kSafeUrgentReply};
            output->image.reset();
        }
        store_.append_memory({.phone = user.phone,
                              .ts = now,
                              .kind = MemoryKind::UrgentAlert,
                              .summary = "User reported: " + one_line(task.user_message),
                              .linked_vitals = json::array()});
    }

    store_.append_cost({.phone = user.phone,
                        .ts = now,
                        .tier = std::string(router::to_string(tier)),
                        .tokens_per_model = tokens,
                        .total_usd = usd(tokens, config_.prices)});

    if (!output) {
        out.path = MessageOutcome::Path::Apology;
        out.sent = say(user.phone, {kApology}, {}, reply_to);
        audit(user.phone, "user_flow", {{"task", task.task}, {"tier", router::to_string(tier)}, {"status", "apology"},
                                        {"model_calls", out.model_calls}});
        return out;
    }
    out.sent = dispatcher_.deliver(user.phone, *output, reply_to);
    out.output = std::move(output);
    audit(user.phone, "user_flow",
          {{"task", task.task},
           {"tier", router::to_string(tier)},
           {"depth", depth == PromptDepth::Minimal ? "minimal" : "detailed"},
           {"status", "ok"},
           {"urgency", to_string(out.output->urgency)},
           {"model_calls", out.model_calls},
           {"sent", out.sent.size()}});
    return out;
}

void Orchestrator::schedule_defaults(const UserProfile& user) {
    const std::int64_t now = clock_.now();
    auto add = [&](TaskKind kind, const std::string& expr) {
        for (const auto& t : store_.tasks()) {
            if (t.user == user.phone && t.kind == kind) return;
        }
        ScheduledTask t{.id = agent_tools::random_hex_id(),
                        .user = user.phone,
                        .kind = kind,
                        .cron_expr = expr,
                        .payload = {},
                        .next_fire_ts = agent_tools::CronExpr::parse(expr).next_after(now),
                        .last_fire_ts = 0};
        store_.put_task(t);
    };
    add(TaskKind::DailySummary, user.preferences.summary_cron);
    add(TaskKind::NoDataCheck, config_.no_data_cron);
}

void Orchestrator::run_task(const ScheduledTask& task, std::int64_t instant) {
    std::lock_guard lock(user_mutex(task.user));
    const auto user = store_.user(task.user);
    if (!user) return;
    switch (task.kind) {
        case TaskKind::NoDataCheck:
            if (auto env = agent_tools::fire_no_data_check(store_, user->phone, instant, config_.no_data_interval_s)) {
                dispatcher_.send(*env);
                audit(user->phone, "no_data_reminder", {{"task", task.id}});
            }
            return;
        case TaskKind::DailySummary:
            agent_flow(*user, {.task = "daily_summary", .user_message = {}, .payload = task.payload},
                       router::Tier::Reasoning, PromptDepth::Detailed, std::nullopt);
            return;
        case TaskKind::MedicationReminder:
            agent_flow(*user, {.task = "medication_reminder", .user_message = {}, .payload = task.payload},
                       router::Tier::Simple, PromptDepth::Minimal, std::nullopt);
            return;
        case TaskKind::Custom:
            agent_flow(*user, {.task = "custom", .user_message = task.payload, .payload = {}},
                       router::Tier::Simple, PromptDepth::Minimal, std::nullopt);
            return;
    }
}

}  // namespace vitalink::orchestrator
