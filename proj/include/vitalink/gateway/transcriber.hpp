#pragma once

#include <map>
#include <mutex>
#include <string>

#include "vitalink/agent_tools/media_store.hpp"
#include "vitalink/gateway/envelope.hpp"

namespace vitalink::gateway {

/// Offline stand-in for speech-to-text. A scripted transcript for the media
/// id wins; otherwise media stored as text/plain is its own transcript.
/// Anything else throws TranscriptionFailure.
class StubTranscriber {
public:
    explicit StubTranscriber(const agent_tools::MediaStore& media) : media_(media) {}

    void script(const std::string& media_id, std::string transcript);
    std::string operator()(const ChatEnvelope& envelope) const;

private:
    const agent_tools::MediaStore& media_;
    mutable std::mutex mutex_;
    std::map<std::string, std::string> scripted_;
};

}  // namespace vitalink::gateway
