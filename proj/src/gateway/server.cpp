#include "vitalink/gateway/server.hpp"

#include <httplib.h>
#include <openssl/rand.h>

#include <limits>

#include "vitalink/error.hpp"
#include "vitalink/gateway/auth.hpp"

namespace vitalink::gateway {

using nlohmann::json;

namespace {

template <typename T>
std::vector<T> channel(const json& burst, const char* key, std::size_t expected) {
    if (!burst.contains(key) || !burst[key].is_array()) throw SchemaViolation(std::string("burst.") + key + " missing");
    const auto& arr = burst[key];
    if (arr.size() != expected) {
        throw SchemaViolation(std::string("burst.") + key + " has " + std::to_string(arr.size()) + " samples, expected " +
                              std::to_string(expected));
    }
    std::vector<T> out;
    out.reserve(expected);
    for (const auto& v : arr) {
        if (!v.is_number_integer()) throw SchemaViolation(std::string("burst.") + key + " values must be integers");
        const auto x = v.get<std::int64_t>();
        if (x < std::numeric_limits<T>::min() || x > std::numeric_limits<T>::max()) {
            throw SchemaViolation(std::string("burst.") + key + " value out of range");
        }
        out.push_back(static_cast<T>(x));
    }
    return out;
}

Response error(int status, const std::string& message) { return {status, {{"error", message}}}; }

std::string random_secret() {
    unsigned char buf[32];
    if (RAND_bytes(buf, sizeof buf) != 1) throw ConfigError("RAND_bytes failed");
    return to_hex(buf, sizeof buf);
}

}  // namespace

json to_json(const SensorUpload& upload) {
    json bursts = json::array();
    for (const auto& b : upload.bursts) {
        bursts.push_back({{"ts", b.burst.ts},
                          {"anomaly", b.anomaly},
                          {"accel_x", b.burst.accel_x},
                          {"accel_y", b.burst.accel_y},
                          {"accel_z", b.burst.accel_z},
                          {"ir", b.burst.ir},
                          {"red", b.burst.red},
                          {"temp_wrist", b.burst.temp_wrist},
                          {"temp_ambient", b.burst.temp_ambient}});
    }
    return {{"device_id", upload.device_id}, {"uploaded_at", upload.uploaded_at}, {"bursts", bursts}};
}

SensorUpload parse_sensor_upload(const json& j) {
    if (!j.is_object()) throw SchemaViolation("upload must be a JSON object");
    if (!j.contains("device_id") || !j["device_id"].is_string() || j["device_id"].get<std::string>().empty()) {
        throw SchemaViolation("device_id missing");
    }
    if (!j.contains("bursts") || !j["bursts"].is_array()) throw SchemaViolation("bursts missing");
    SensorUpload up;
    up.device_id = j["device_id"].get<std::string>();
    if (j.contains("uploaded_at")) {
        if (!j["uploaded_at"].is_number_integer()) throw SchemaViolation("uploaded_at must be an integer");
        up.uploaded_at = j["uploaded_at"].get<std::int64_t>();
    }
    for (const auto& b : j["bursts"]) {
        if (!b.is_object()) throw SchemaViolation("burst must be an object");
        if (!b.contains("ts") || !b["ts"].is_number_unsigned() ||
            b["ts"].get<std::uint64_t>() > std::numeric_limits<std::uint32_t>::max()) {
            throw SchemaViolation("burst.ts must be a 32-bit unix timestamp");
        }
        UploadedBurst ub;
        ub.burst.ts = b["ts"].get<std::uint32_t>();
        ub.burst.device_id = up.device_id;
        if (b.contains("anomaly")) {
            if (!b["anomaly"].is_boolean()) throw SchemaViolation("burst.anomaly must be a boolean");
            ub.anomaly = b["anomaly"].get<bool>();
        }
        ub.burst.accel_x = channel<std::int16_t>(b, "accel_x", wire::kAccelSamples);
        ub.burst.accel_y = channel<std::int16_t>(b, "accel_y", wire::kAccelSamples);
        ub.burst.accel_z = channel<std::int16_t>(b, "accel_z", wire::kAccelSamples);
        ub.burst.ir = channel<std::uint16_t>(b, "ir", wire::kPpgSamples);
        ub.burst.red = channel<std::uint16_t>(b, "red", wire::kPpgSamples);
        ub.burst.temp_wrist = channel<std::uint16_t>(b, "temp_wrist", wire::kTempSamples);
        ub.burst.temp_ambient = channel<std::uint16_t>(b, "temp_ambient", wire::kTempSamples);
        if (!up.bursts.empty() && ub.burst.ts < up.bursts.back().burst.ts) {
            throw SchemaViolation("bursts must be in time order");
        }
        up.bursts.push_back(std::move(ub));
    }
    return up;
}

Gateway::Gateway(GatewayConfig config, orchestrator::Store& store, orchestrator::Orchestrator& orchestrator,
                 Delivery& delivery, agent_tools::MediaStore& media, const Clock& clock, LoopbackTransport* outbox)
    : config_(std::move(config)),
      store_(store),
      orchestrator_(orchestrator),
      delivery_(delivery),
      media_(media),
      clock_(clock),
      outbox_(outbox) {
    if (config_.token_secret.empty()) config_.token_secret = random_secret();
    if (config_.pbkdf2_iterations < 1) throw ConfigError("pbkdf2_iterations must be >= 1");
}

Gateway::~Gateway() { stop(); }

std::mutex& Gateway::device_mutex(const std::string& device_id) {
    std::lock_guard lock(devices_mutex_);
    auto& m = device_mutexes_[device_id];
    if (!m) m = std::make_unique<std::mutex>();
    return *m;
}

Response Gateway::signup(const std::string& body) {
    const json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return error(400, "body must be a JSON object");
    if (!j.contains("phone") || !j["phone"].is_string() || !orchestrator::is_e164(j["phone"].get<std::string>())) {
        return error(400, "phone must be an E.164 number such as +15551234567");
    }
    if (!j.contains("passcode") || !j["passcode"].is_string() || j["passcode"].get<std::string>().size() < 4) {
        return error(400, "passcode must be at least 4 characters");
    }
    std::optional<std::string> device_id;
    if (j.contains("device_id") && !j["device_id"].is_null()) {
        if (!j["device_id"].is_string() || j["device_id"].get<std::string>().empty()) {
            return error(400, "device_id must be a non-empty string");
        }
        device_id = j["device_id"].get<std::string>();
    }
    const auto phone = j["phone"].get<std::string>();
    const auto passcode = j["passcode"].get<std::string>();

    bool created = false;
    orchestrator::UserProfile user;
    {
        std::lock_guard lock(signup_mutex_);
        if (auto existing = store_.user(phone)) {
            if (!verify_passcode(passcode, {existing->passcode_hash, existing->passcode_salt})) {
                return error(409, "phone already registered");
            }
            if (device_id && *device_id != existing->device_id) {
                return error(409, "phone already registered with another device");
            }
            user = *existing;
        } else {
            if (device_id && store_.user_by_device(*device_id)) return error(409, "device already registered");
            const auto rec = hash_passcode(passcode, config_.pbkdf2_iterations);
            user.phone = phone;
            user.passcode_hash = rec.hash;
            user.passcode_salt = rec.salt;
            user.device_id = device_id.value_or("band-" + agent_tools::random_hex_id().substr(0, 12));
            user.thresholds = orchestrator_.config().default_thresholds;
            user.created_at = clock_.now();
            store_.put_user(user);
            store_.append_audit({.ts = clock_.now(), .phone = phone, .event = "signup", .details = {{"device_id", user.device_id}}});
            created = true;
        }
    }
    // Idempotent: only the first call for a phone sends the welcome.
    orchestrator_.conversational_signup(phone);
    return {created ? 201 : 200,
            {{"phone", phone},
             {"device_id", user.device_id},
             {"token", issue_token(config_.token_secret, phone)},
             {"created", created}}};
}

Response Gateway::sensors(const std::string& authorization, const std::string& body) {
    const json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) return error(400, "body is not JSON");
    SensorUpload upload;
    try {
        upload = parse_sensor_upload(j);
    } catch (const SchemaViolation& e) {
        return error(400, e.what());
    }
    const auto user = store_.user_by_device(upload.device_id);
    if (!user) return error(401, "unknown device");
    const auto token = bearer(authorization);
    const auto token_phone = token ? verify_token(config_.token_secret, *token) : std::nullopt;
    if (!token_phone || *token_phone != user->phone) return error(401, "invalid or missing bearer token");
    if (user->preferences.uploads_paused) {
        return {200, {{"accepted", 0}, {"duplicates", 0}, {"paused", true}, {"estimates", json::array()}}};
    }

    std::lock_guard lock(device_mutex(upload.device_id));
    int accepted = 0, duplicates = 0;
    json estimates = json::array();
    std::set<std::uint32_t> seen;
    for (const auto& b : upload.bursts) {
        if (!seen.insert(b.burst.ts).second || store_.has_vital(user->phone, b.burst.ts)) {
            ++duplicates;
            continue;
        }
        try {
            const auto outcome = orchestrator_.handle_sensor_burst(b.burst, b.anomaly);
            ++accepted;
            json e = outcome.stored.estimate;
            e["status"] = interpreter::to_string(outcome.status);
            e["evaluated"] = outcome.evaluated;
            e["urgency"] = orchestrator::to_string(outcome.urgency);
            estimates.push_back(std::move(e));
        } catch (const UnknownDevice&) {
            return error(401, "unknown device");
        } catch (const StorageFailure& e) {
            return error(500, e.what());
        }
    }
    return {200, {{"accepted", accepted}, {"duplicates", duplicates}, {"paused", false}, {"estimates", estimates}}};
}

Response Gateway::webhook(const std::string& body) {
    const json j = json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object()) return error(400, "body must be a JSON object");
    ChatEnvelope env;
    try {
        env = j.get<ChatEnvelope>();
    } catch (const SchemaViolation& e) {
        return error(400, e.what());
    } catch (const json::exception& e) {
        return error(400, std::string("malformed envelope: ") + e.what());
    }
    env.direction = Direction::Inbound;
    if (env.kind == EnvelopeKind::Image) return error(400, "inbound images are not supported");
    if (!store_.user(env.user_phone)) return error(404, "unknown sender; sign up first");
    if (env.id.empty()) env.id = agent_tools::random_hex_id();
    if (env.ts == 0) env.ts = clock_.now();

    const std::string key = env.user_phone + '\x1f' + std::to_string(env.ts) + '\x1f' + std::string(to_string(env.kind)) +
                            '\x1f' + env.body + '\x1f' + env.media_id.value_or("");
    {
        std::lock_guard lock(webhook_mutex_);
        if (!seen_inbound_.insert(key).second) return {200, {{"status", "duplicate"}}};
    }
    try {
        const auto out = orchestrator_.handle_user_message(env);
        static const char* paths[] = {"agent", "signup", "command", "apology"};
        return {200,
                {{"status", "ok"},
                 {"id", env.id},
                 {"path", paths[static_cast<int>(out.path)]},
                 {"replies", out.sent.size()}}};
    } catch (const UnknownUser&) {
        return error(404, "unknown sender; sign up first");
    } catch (const StorageFailure& e) {
        std::lock_guard lock(webhook_mutex_);
        seen_inbound_.erase(key);  // let the sender retry
        return error(500, e.what());
    }
}

Response Gateway::outbox(const std::string& authorization, const std::string& cursor) {
    if (!outbox_) return error(404, "outbox is only available with the loopback transport");
    const auto token = bearer(authorization);
    const auto phone = token ? verify_token(config_.token_secret, *token) : std::nullopt;
    if (!phone) return error(401, "invalid or missing bearer token");
    std::size_t c = 0;
    if (!cursor.empty()) {
        try {
            std::size_t used = 0;
            const auto v = std::stoll(cursor, &used);
            if (used != cursor.size() || v < 0) throw std::invalid_argument(cursor);
            c = static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            return error(400, "cursor must be a non-negative integer");
        }
    }
    const auto page = outbox_->since(c, *phone);
    return {200, {{"envelopes", page.envelopes}, {"next_cursor", page.next_cursor}}};
}

Response Gateway::upload_media(const std::string& authorization, std::string bytes, const std::string& content_type) {
    const auto token = bearer(authorization);
    const auto phone = token ? verify_token(config_.token_secret, *token) : std::nullopt;
    if (!phone || !store_.user(*phone)) return error(401, "invalid or missing bearer token");
    if (bytes.empty()) return error(400, "empty body");
    const auto id = media_.put(std::move(bytes), content_type.empty() ? "application/octet-stream" : content_type);
    return {201, {{"id", id}}};
}

Response Gateway::health() const {
    return {200,
            {{"status", "ok"},
             {"time", format_utc(clock_.now())},
             {"users", store_.users().size()},
             {"queued_deliveries", delivery_.queued()}}};
}

std::optional<agent_tools::Media> Gateway::media(const std::string& id) const { return media_.get(id); }

int Gateway::start() {
    stop();
    server_ = std::make_unique<httplib::Server>();
    auto& svr = *server_;
    svr.set_payload_max_length(config_.max_body_bytes);
    auto reply = [](httplib::Response& res, const Response& r) {
        res.status = r.status;
        res.set_content(r.body.dump(), "application/json");
    };
    svr.Post("/v1/signup", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, signup(req.body));
    });
    svr.Post("/v1/sensors", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, sensors(req.get_header_value("Authorization"), req.body));
    });
    svr.Post("/v1/webhook", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, webhook(req.body));
    });
    svr.Get("/v1/outbox", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, outbox(req.get_header_value("Authorization"), req.get_param_value("cursor")));
    });
    svr.Post("/v1/media", [this, reply](const httplib::Request& req, httplib::Response& res) {
        reply(res, upload_media(req.get_header_value("Authorization"), req.body, req.get_header_value("Content-Type")));
    });
    svr.Get(R"(/v1/media/([^/]+))", [this, reply](const httplib::Request& req, httplib::Response& res) {
        const auto m = media(req.matches[1]);
        if (!m) return reply(res, error(404, "unknown media id"));
        res.status = 200;
        res.set_content(m->bytes, m->content_type);
    });
    svr.Get("/v1/health", [this, reply](const httplib::Request&, httplib::Response& res) { reply(res, health()); });
    // The companion UI may be served from another origin during development.
    svr.Options(R"(/v1/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    svr.set_post_routing_handler([](const httplib::Request&, httplib::Response& res) {
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_header("Access-Control-Allow-Headers", "Authorization, Content-Type");
        res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    });

    int port = config_.port;
    if (port == 0) {
        port = svr.bind_to_any_port(config_.host);
        if (port < 0) throw ConfigError("cannot bind " + config_.host);
    } else if (!svr.bind_to_port(config_.host, port)) {
        throw ConfigError("cannot bind " + config_.host + ":" + std::to_string(port));
    }
    {
        std::lock_guard lock(bg_mutex_);
        stopping_ = false;
    }
    server_thread_ = std::thread([this] { server_->listen_after_bind(); });
    background_ = std::thread([this] { background_loop(); });
    delivery_.start_retry_loop(config_.retry_period);
    return port;
}

void Gateway::background_loop() {
    std::unique_lock lock(bg_mutex_);
    while (!bg_cv_.wait_for(lock, config_.evaluation_period, [this] { return stopping_; })) {
        lock.unlock();
        try {
            orchestrator_.evaluate_pending();
        } catch (const Error&) {
            // Retried on the next period; the estimates stay pending.
        }
        lock.lock();
    }
}

void Gateway::wait() {
    if (server_thread_.joinable()) server_thread_.join();
}

void Gateway::stop() {
    {
        std::lock_guard lock(bg_mutex_);
        stopping_ = true;
    }
    bg_cv_.notify_all();
    if (server_) server_->stop();
    if (server_thread_.joinable()) server_thread_.join();
    if (background_.joinable()) background_.join();
    delivery_.stop_retry_loop();
}

}  // namespace vitalink::gateway
