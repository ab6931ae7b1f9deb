#pragma once

#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace vitalink::agent_tools {

struct Media {
    std::string bytes;
    std::string content_type;
};

/// Binary artifacts addressed by opaque random ids (32 hex characters).
/// Memory-only when constructed without a directory.
class MediaStore {
public:
    MediaStore() = default;
    explicit MediaStore(std::filesystem::path dir);

    std::string put(std::string bytes, std::string content_type);
    /// Absent for unknown or syntactically invalid ids.
    std::optional<Media> get(const std::string& id) const;

    static bool valid_id(const std::string& id);

private:
    std::optional<std::filesystem::path> dir_;
    mutable std::mutex mutex_;
    std::map<std::string, Media> memory_;
};

}  // namespace vitalink::agent_tools
