#include "vitalink/gateway/transcriber.hpp"

#include "vitalink/error.hpp"

namespace vitalink::gateway {

void StubTranscriber::script(const std::string& media_id, std::string transcript) {
    std::lock_guard lock(mutex_);
    scripted_[media_id] = std::move(transcript);
}

std::string StubTranscriber::operator()(const ChatEnvelope& envelope) const {
    if (!envelope.media_id) throw TranscriptionFailure("audio envelope without media reference");
    {
        std::lock_guard lock(mutex_);
        if (auto it = scripted_.find(*envelope.media_id); it != scripted_.end()) return it->second;
    }
    const auto media = media_.get(*envelope.media_id);
    if (!media) throw TranscriptionFailure("unknown media " + *envelope.media_id);
    if (!media->content_type.starts_with("text/plain")) {
        throw TranscriptionFailure("no transcript available for " + media->content_type);
    }
    if (media->bytes.empty()) throw TranscriptionFailure("empty recording");
    return media->bytes;
}

}  // namespace vitalink::gateway
