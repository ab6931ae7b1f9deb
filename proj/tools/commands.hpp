#pragma once

#include <memory>
#include <string>

#include <CLI11.hpp>

#include "vitalink/interpreter/model_client.hpp"

namespace vitalink::cli {

// Each function adds one subcommand to `app`.
void add_simulate_device(CLI::App& app);
void add_decode(CLI::App& app);
void add_cost_study(CLI::App& app);
void add_eval(CLI::App& app);
void add_make_synthetic_dataset(CLI::App& app);
void add_serve(CLI::App& app);
void add_export_user(CLI::App& app);
void add_delete_user(CLI::App& app);

/// "stub" is the offline model; "live" reads VITALINK_LLM_ENDPOINT and
/// VITALINK_LLM_API_KEY.
std::unique_ptr<interpreter::ModelClient> make_model_client(const std::string& kind, int timeout_s = 60);

/// Thrown by a command to exit with a message and a non-zero status.
struct Failure : std::runtime_error {
    int code;
    Failure(const std::string& message, int exit_code = 1) : std::runtime_error(message), code(exit_code) {}
};

}  // namespace vitalink::cli
