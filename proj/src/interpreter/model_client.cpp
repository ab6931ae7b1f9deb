#include "vitalink/interpreter/model_client.hpp"

#include "vitalink/error.hpp"

namespace vitalink::interpreter {

void ModelParams::validate() const {
    if (!(temperature >= 0.0)) throw ConfigError("temperature must be >= 0");
    if (!(top_p > 0.0 && top_p <= 1.0)) throw ConfigError("top_p must be in (0, 1]");
    if (model_name.empty()) throw ConfigError("model name must not be empty");
}

ScriptedModelClient::ScriptedModelClient(std::vector<std::string> script, std::string fallback)
    : script_(script.begin(), script.end()),
      fallback_(std::move(fallback)),
      has_fallback_(!fallback_.empty()) {}

void ScriptedModelClient::push(std::string reply) {
    std::lock_guard lock(mutex_);
    script_.push_back(std::move(reply));
}

void ScriptedModelClient::set_fallback(std::string reply) {
    std::lock_guard lock(mutex_);
    fallback_ = std::move(reply);
    has_fallback_ = true;
}

std::string ScriptedModelClient::complete(const std::string& prompt, const ModelParams& params) {
    std::string reply;
    {
        std::lock_guard lock(mutex_);
        calls_.push_back({prompt, params});
        if (!script_.empty()) {
            reply = std::move(script_.front());
            script_.pop_front();
        } else if (has_fallback_) {
            reply = fallback_;
        } else {
            throw ClientUnavailable("scripted client has no reply left");
        }
    }
    if (reply == kUnavailable) {
        throw ClientUnavailable("scripted outage");
    }
    return reply;
}

std::vector<ScriptedModelClient::Call> ScriptedModelClient::calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
}

std::size_t ScriptedModelClient::call_count() const {
    std::lock_guard lock(mutex_);
    return calls_.size();
}

}  // namespace vitalink::interpreter
