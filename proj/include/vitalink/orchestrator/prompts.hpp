#pragma once

#include <array>
#include <string_view>

// Section markers shared by prompt assembly and the offline model.
namespace vitalink::orchestrator::prompts {

inline constexpr std::string_view kHistory = "### Conversational History";
inline constexpr std::string_view kMemory = "### Long-Term Memory";
inline constexpr std::string_view kMetrics = "### Recent Metrics";
inline constexpr std::string_view kProfile = "### User Profile";
inline constexpr std::string_view kTemporal = "### Temporal Context";
inline constexpr std::string_view kTask = "### Task Instructions";
inline constexpr std::string_view kSchema = "### Output Structure Specifications";

/// Context sections in the order they are emitted.
inline constexpr std::array<std::string_view, 7> kSections = {
    kHistory, kMemory, kMetrics, kProfile, kTemporal, kTask, kSchema};

inline constexpr std::string_view kQcReview = "### Quality Control Review";
inline constexpr std::string_view kProfileExtraction = "### Profile Extraction";

// Line prefixes inside sections.
inline constexpr std::string_view kTaskLabel = "Task: ";
inline constexpr std::string_view kUserMessageLabel = "User message: ";
inline constexpr std::string_view kReplyLabel = "Reply: ";
inline constexpr std::string_view kDraftLabel = "Draft: ";

}  // namespace vitalink::orchestrator::prompts
