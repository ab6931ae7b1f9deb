#pragma once

#include <chrono>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "vitalink/eval/dataset.hpp"
#include "vitalink/gateway/server.hpp"
#include "vitalink/orchestrator/orchestrator.hpp"

namespace vitalink {

/// Everything `vitalink serve` and `vitalink eval` read from the service
/// config file. Every key is optional and defaults to the value below.
/// Credentials for the live model never live here; they come from
/// VITALINK_LLM_ENDPOINT and VITALINK_LLM_API_KEY.
struct ServiceConfig {
    gateway::GatewayConfig gateway;
    std::filesystem::path data_dir;  // empty keeps all state in memory
    std::string transport = "loopback";  // or "jsonl"
    std::filesystem::path transport_file = "outbox.jsonl";  // relative to data_dir
    std::string model_client = "stub";   // or "live"
    int model_timeout_s = 60;
    std::string classifier = "heuristic";  // or "model"
    std::filesystem::path corpus_dir;
    std::chrono::milliseconds scheduler_period{1000};
    orchestrator::OrchestratorConfig orchestrator;
    eval::DatasetLayout dataset;
};

/// Throws ConfigError on an unknown key, a value of the wrong type or a value
/// that fails validation. Relative paths are resolved against `base_dir`.
ServiceConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
/// Reads and parses a JSON config file; relative paths in it are resolved
/// against the file's directory.
ServiceConfig load_config(const std::filesystem::path& file);

}  // namespace vitalink
