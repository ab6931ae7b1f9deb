#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "vitalink/agent_tools/media_store.hpp"
#include "vitalink/clock.hpp"
#include "vitalink/gateway/delivery.hpp"
#include "vitalink/orchestrator/orchestrator.hpp"
#include "vitalink/orchestrator/store.hpp"
#include "vitalink/wire/burst.hpp"

namespace httplib {
class Server;
}

namespace vitalink::gateway {

/// One burst of a sensor upload with the companion app's anomaly flag.
struct UploadedBurst {
    wire::SensorBurst burst;
    bool anomaly = false;
};

/// POST /v1/sensors body:
///   {"device_id": str, "uploaded_at": int,
///    "bursts": [{"ts": int, "anomaly": bool, "accel_x": [...], "accel_y": [...],
///                "accel_z": [...], "ir": [...], "red": [...],
///                "temp_wrist": [...], "temp_ambient": [...]}]}
/// Channel values are raw counts (temperatures in hundredths of a degree).
struct SensorUpload {
    std::string device_id;
    std::int64_t uploaded_at = 0;
    std::vector<UploadedBurst> bursts;
};

nlohmann::json to_json(const SensorUpload& upload);
/// Throws SchemaViolation on a missing field, an out-of-range sample, a
/// channel of the wrong length or bursts out of time order.
SensorUpload parse_sensor_upload(const nlohmann::json& j);

struct GatewayConfig {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
    /// HMAC key for bearer tokens. Empty means a random key per process, so
    /// tokens do not survive a restart.
    std::string token_secret;
    int pbkdf2_iterations = 100000;
    std::size_t max_body_bytes = 8u << 20;
    std::chrono::milliseconds evaluation_period{60000};
    std::chrono::milliseconds retry_period{2000};
};

struct Response {
    int status = 200;
    nlohmann::json body = nlohmann::json::object();
};

/// HTTP face of the system. Each endpoint is also callable directly so the
/// request logic can be exercised without sockets.
class Gateway {
public:
    Gateway(GatewayConfig config, orchestrator::Store& store, orchestrator::Orchestrator& orchestrator,
            Delivery& delivery, agent_tools::MediaStore& media, const Clock& clock,
            LoopbackTransport* outbox = nullptr);
    ~Gateway();

    Response signup(const std::string& body);
    Response sensors(const std::string& authorization, const std::string& body);
    Response webhook(const std::string& body);
    Response outbox(const std::string& authorization, const std::string& cursor);
    Response upload_media(const std::string& authorization, std::string bytes, const std::string& content_type);
    Response health() const;
    std::optional<agent_tools::Media> media(const std::string& id) const;

    const std::string& token_secret() const { return config_.token_secret; }

    /// Binds, then serves on a background thread together with the pending
    /// evaluation and delivery retry loops. Returns the bound port.
    int start();
    /// Blocks until stop() is called from elsewhere.
    void wait();
    void stop();

private:
    std::mutex& device_mutex(const std::string& device_id);
    void background_loop();

    GatewayConfig config_;
    orchestrator::Store& store_;
    orchestrator::Orchestrator& orchestrator_;
    Delivery& delivery_;
    agent_tools::MediaStore& media_;
    const Clock& clock_;
    LoopbackTransport* outbox_;

    std::mutex signup_mutex_;
    std::mutex devices_mutex_;
    std::map<std::string, std::unique_ptr<std::mutex>> device_mutexes_;
    std::mutex webhook_mutex_;
    std::set<std::string> seen_inbound_;

    std::unique_ptr<httplib::Server> server_;
    std::thread server_thread_;
    std::thread background_;
    std::mutex bg_mutex_;
    std::condition_variable bg_cv_;
    bool stopping_ = false;
};

}  // namespace vitalink::gateway
