#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "vitalink/agent_tools/retrieval.hpp"
#include "vitalink/orchestrator/records.hpp"
#include "vitalink/orchestrator/store.hpp"

namespace vitalink::orchestrator {

/// Minimal prompts carry the short instruction template and smaller windows;
/// detailed prompts carry the full guidance and the configured windows.
enum class PromptDepth { Minimal, Detailed };

struct ContextWindows {
    std::size_t history_turns = 10;   // K
    std::size_t metrics = 90;         // N
    std::size_t minimal_history_turns = 4;
    std::size_t minimal_metrics = 6;
};

/// The seven prompt sections. Each holds rendered lines; every line that
/// describes a stored record starts with that record's UTC timestamp.
struct ContextBundle {
    std::vector<std::string> conversational_history;
    std::vector<std::string> long_term_memory;
    std::vector<std::string> recent_metrics;
    std::vector<std::string> profile;
    std::vector<std::string> temporal_context;
    std::vector<std::string> task_instructions;
    std::vector<std::string> output_schema_spec;

    /// Sections under their markers, always all seven and in fixed order.
    std::string render() const;
};

struct TaskSpec {
    std::string task = "reply";  // reply, daily_summary, no_data_check, medication_reminder, custom
    std::string user_message;
    std::string payload;
};

/// One metrics line: "- <ts> hr=72.0 spo2=97.0 activity=sit temp_body=36.5
/// temp_ambient=25.0 source=llm"; absent fields are omitted.
std::string metrics_line(const interpreter::VitalEstimate& e);

ContextBundle assemble_context(const Store& store, const UserProfile& user, std::int64_t now,
                               const TaskSpec& task, PromptDepth depth, const ContextWindows& windows,
                               const std::vector<agent_tools::KnowledgePassage>& passages = {});

}  // namespace vitalink::orchestrator
