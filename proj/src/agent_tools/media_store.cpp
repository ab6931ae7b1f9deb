#include "vitalink/agent_tools/media_store.hpp"

#include <fstream>
#include <sstream>

#include "vitalink/agent_tools/scheduler.hpp"
#include "vitalink/error.hpp"

namespace vitalink::agent_tools {

namespace fs = std::filesystem;

MediaStore::MediaStore(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(*dir_, ec);
    if (ec) throw StorageFailure("cannot create " + dir_->string() + ": " + ec.message());
}

bool MediaStore::valid_id(const std::string& id) {
    if (id.size() != 32) return false;
    for (char c : id) {
        if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
    }
    return true;
}

std::string MediaStore::put(std::string bytes, std::string content_type) {
    const std::string id = random_hex_id();
    std::lock_guard lock(mutex_);
    if (dir_) {
        std::ofstream data(*dir_ / (id + ".bin"), std::ios::binary);
        data.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        std::ofstream type(*dir_ / (id + ".type"));
        type << content_type;
        if (!data || !type) throw StorageFailure("cannot write media " + id);
        return id;
    }
    memory_[id] = Media{std::move(bytes), std::move(content_type)};
    return id;
}

std::optional<Media> MediaStore::get(const std::string& id) const {
    if (!valid_id(id)) return std::nullopt;
    std::lock_guard lock(mutex_);
    if (auto it = memory_.find(id); it != memory_.end()) return it->second;
    if (!dir_) return std::nullopt;
    std::ifstream data(*dir_ / (id + ".bin"), std::ios::binary);
    if (!data) return std::nullopt;
    std::ostringstream bytes;
    bytes << data.rdbuf();
    std::ifstream type(*dir_ / (id + ".type"));
    std::string content_type;
    std::getline(type, content_type);
    return Media{bytes.str(), content_type};
}

}  // namespace vitalink::agent_tools
