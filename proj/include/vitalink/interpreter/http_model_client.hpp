#pragma once

#include <string>

#include "vitalink/interpreter/model_client.hpp"

namespace vitalink::interpreter {

struct HttpModelConfig {
    std::string endpoint;  // full chat-completions URL
    std::string api_key;
    int timeout_s = 60;

    /// Reads VITALINK_LLM_ENDPOINT and VITALINK_LLM_API_KEY. Throws ConfigError
    /// if the endpoint is unset.
    static HttpModelConfig from_env();
};

/// Chat-completions client. Sends the prompt as a single user message and
/// returns the first choice's content. Sampling parameters are omitted for
/// reasoning models (o1, o3 families), which reject them.
///
/// Throws ClientUnavailable on transport errors and non-2xx statuses,
/// MalformedReply when the response body lacks a message content.
class HttpModelClient final : public ModelClient {
public:
    explicit HttpModelClient(HttpModelConfig config);
    std::string complete(const std::string& prompt, const ModelParams& params) override;

    /// Request body for `prompt`; exposed for tests.
    static std::string request_body(const std::string& prompt, const ModelParams& params);
    /// Extracts choices[0].message.content.
    static std::string response_content(const std::string& body);

private:
    HttpModelConfig config_;
    std::string base_;  // scheme://host[:port]
    std::string path_;
};

}  // namespace vitalink::interpreter
