#include "vitalink/interpreter/http_model_client.hpp"

#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "vitalink/error.hpp"

namespace vitalink::interpreter {

using nlohmann::json;

HttpModelConfig HttpModelConfig::from_env() {
    HttpModelConfig c;
    if (const char* e = std::getenv("VITALINK_LLM_ENDPOINT")) c.endpoint = e;
    if (const char* k = std::getenv("VITALINK_LLM_API_KEY")) c.api_key = k;
    if (c.endpoint.empty()) throw ConfigError("VITALINK_LLM_ENDPOINT is not set");
    return c;
}

HttpModelClient::HttpModelClient(HttpModelConfig config) : config_(std::move(config)) {
    const auto scheme = config_.endpoint.find("://");
    if (scheme == std::string::npos) throw ConfigError("endpoint must be an absolute URL");
    const auto slash = config_.endpoint.find('/', scheme + 3);
    base_ = config_.endpoint.substr(0, slash);
    path_ = slash == std::string::npos ? "/" : config_.endpoint.substr(slash);
}

std::string HttpModelClient::request_body(const std::string& prompt, const ModelParams& params) {
    json body;
    body["model"] = params.model_name;
    body["messages"] = json::array({{{"role", "user"}, {"content", prompt}}});
    const bool reasoning = params.model_name.starts_with("o1") || params.model_name.starts_with("o3");
    if (!reasoning) {
        body["temperature"] = params.temperature;
        body["top_p"] = params.top_p;
    }
    return body.dump();
}

std::string HttpModelClient::response_content(const std::string& body) {
    const json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) throw MalformedReply("response body is not JSON");
    try {
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception&) {
        throw MalformedReply("response has no choices[0].message.content");
    }
}

std::string HttpModelClient::complete(const std::string& prompt, const ModelParams& params) {
    params.validate();
    httplib::Client client(base_);
    client.set_connection_timeout(config_.timeout_s, 0);
    client.set_read_timeout(config_.timeout_s, 0);
    httplib::Headers headers;
    if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
    auto res = client.Post(path_, headers, request_body(prompt, params), "application/json");
    if (!res) throw ClientUnavailable(httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300) {
        throw ClientUnavailable("HTTP " + std::to_string(res->status));
    }
    return response_content(res->body);
}

}  // namespace vitalink::interpreter
