#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "vitalink/agent_tools/retrieval.hpp"
#include "vitalink/agent_tools/scheduler.hpp"
#include "vitalink/clock.hpp"
#include "vitalink/gateway/envelope.hpp"
#include "vitalink/interpreter/interpreter.hpp"
#include "vitalink/orchestrator/agent_output.hpp"
#include "vitalink/orchestrator/context.hpp"
#include "vitalink/orchestrator/store.hpp"
#include "vitalink/router/router.hpp"
#include "vitalink/wire/burst.hpp"

namespace vitalink::orchestrator {

/// Outbound side of the orchestrator. Implemented by the gateway's delivery
/// layer; every call returns the envelopes in the order they were handed to
/// the transport.
class Dispatcher {
public:
    virtual ~Dispatcher() = default;
    /// Assigns id and ts, records and sends one envelope.
    virtual gateway::ChatEnvelope send(gateway::ChatEnvelope envelope) = 0;
    /// One text per RESPONSE, then the chart if IMAGE is set; QUESTIONS ride
    /// on the final envelope as buttons.
    virtual std::vector<gateway::ChatEnvelope> deliver(const std::string& phone, const AgentOutput& output,
                                                       const std::optional<std::string>& reply_to) = 0;
};

/// Turns an audio envelope into text. Throws TranscriptionFailure.
using Transcriber = std::function<std::string(const gateway::ChatEnvelope&)>;

struct OrchestratorConfig {
    ContextWindows windows;
    std::size_t rag_k = 3;
    router::RouterConfig router;
    router::PriceTable prices = router::PriceTable::defaults();
    interpreter::InterpretPolicy interpret;
    interpreter::ModelParams interpreter_params = interpreter::ModelParams::interpreter_defaults();
    std::string qc_model = "gpt-4o-mini";
    std::string extraction_model = "gpt-4o-mini";
    /// A sensor alert with the same reason is not repeated within this span.
    std::int64_t alert_cooldown_s = 1800;
    std::string no_data_cron = "0 */6 * * *";
    std::int64_t no_data_interval_s = 6 * 3600;
    Thresholds default_thresholds;
};

enum class QcVerdict { Approve, Revise, Reject };

std::string_view to_string(QcVerdict v);

struct QcResult {
    QcVerdict verdict = QcVerdict::Approve;
    std::string reason;
    std::string revised;  // replacement text for Revise
};

/// Review prompt for a drafted urgent message.
std::string qc_prompt(const std::string& draft, const std::vector<std::string>& evidence);
/// {"verdict": "approve"|"revise"|"reject", "reason": str, "revised": str?}.
/// Throws MalformedReply.
QcResult parse_qc_reply(std::string_view text);

/// Prompt asking the model for profile fields stated in a sign-up reply.
std::string profile_extraction_prompt(const std::string& reply);

/// One threshold crossing.
struct AlertReason {
    std::string code;  // hr_high, hr_low, spo2_low, temp_high
    std::string text;
};

/// Threshold rules applied to `latest` given the user's stored history up to
/// and including it. HR needs `hr_sustain` consecutive readings all on the
/// same side of the band; SpO2 and temperature alert on a single reading.
std::vector<AlertReason> evaluate_thresholds(const Store& store, const UserProfile& user,
                                             const StoredVital& latest);

struct SensorOutcome {
    StoredVital stored;
    interpreter::InterpretStatus status = interpreter::InterpretStatus::Llm;
    bool evaluated = false;
    Urgency urgency = Urgency::NotUrgent;
    std::vector<AlertReason> reasons;
    std::optional<QcResult> qc;
    std::vector<gateway::ChatEnvelope> sent;
};

struct MessageOutcome {
    enum class Path { Agent, Signup, Command, Apology };
    Path path = Path::Agent;
    std::optional<router::Tier> tier;
    std::optional<PromptDepth> depth;
    std::optional<AgentOutput> output;
    std::vector<gateway::ChatEnvelope> sent;
    std::string prompt;  // first agent prompt, empty off the agent path
    int model_calls = 0;
};

/// Control core. Flows for different users run concurrently; flows for one
/// user are serialized, so a user's outbound messages are produced in a total
/// order and one reply's messages are never interleaved with another's.
class Orchestrator {
public:
    Orchestrator(Store& store, interpreter::ModelClient& model, Dispatcher& dispatcher, const Clock& clock,
                 OrchestratorConfig config = {});

    void set_transcriber(Transcriber t) { transcriber_ = std::move(t); }
    void set_classifier(std::shared_ptr<router::Classifier> c) { classifier_ = std::move(c); }
    void set_knowledge(const agent_tools::KnowledgeIndex* index) { knowledge_ = index; }

    /// Interprets and stores the burst. Flagged bursts are evaluated against
    /// the user's thresholds now; the rest wait for evaluate_pending().
    /// Throws UnknownDevice, StorageFailure.
    SensorOutcome handle_sensor_burst(const wire::SensorBurst& burst, bool anomaly_flag = false);

    /// Evaluates every stored estimate still waiting, oldest first.
    std::vector<SensorOutcome> evaluate_pending();

    /// Inbound message flow. Unknown senders throw UnknownUser; users whose
    /// profile is incomplete go through conversational sign-up.
    MessageOutcome handle_user_message(const gateway::ChatEnvelope& envelope);

    /// Sends the welcome message unless it was sent before. Returns whether
    /// it was sent now. Throws UnknownUser.
    bool conversational_signup(const std::string& phone);

    /// Scheduler entry point.
    void run_task(const ScheduledTask& task, std::int64_t instant);

    const OrchestratorConfig& config() const { return config_; }

private:
    std::mutex& user_mutex(const std::string& phone);

    SensorOutcome evaluate_locked(const UserProfile& user, const StoredVital& stored);
    QcResult run_qc(const std::string& phone, const std::string& draft, const std::vector<std::string>& evidence,
                    const std::string& context, std::map<std::string, std::size_t>* tokens);
    MessageOutcome agent_flow(const UserProfile& user, const TaskSpec& task, router::Tier tier, PromptDepth depth,
                              const std::optional<std::string>& reply_to);
    MessageOutcome signup_reply(UserProfile user, const std::string& text,
                                const std::optional<std::string>& reply_to);
    std::optional<MessageOutcome> command(UserProfile user, const std::string& text,
                                          const std::optional<std::string>& reply_to);
    std::vector<gateway::ChatEnvelope> say(const std::string& phone, std::vector<std::string> responses,
                                           std::vector<std::string> questions,
                                           const std::optional<std::string>& reply_to);
    void schedule_defaults(const UserProfile& user);
    void audit(const std::string& phone, const std::string& event, nlohmann::json details = nlohmann::json::object());

    Store& store_;
    interpreter::ModelClient& model_;
    Dispatcher& dispatcher_;
    const Clock& clock_;
    OrchestratorConfig config_;
    Transcriber transcriber_;
    std::shared_ptr<router::Classifier> classifier_;
    const agent_tools::KnowledgeIndex* knowledge_ = nullptr;

    std::mutex users_mutex_;
    std::map<std::string, std::unique_ptr<std::mutex>> user_mutexes_;
    std::mutex alerts_mutex_;
    std::map<std::pair<std::string, std::string>, std::int64_t> last_alert_;  // (phone, code) -> ts
};

}  // namespace vitalink::orchestrator
