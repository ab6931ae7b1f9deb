#pragma once

#include <deque>
#include <functional>
#include <mutex>
#include <string>
#include <vector>

namespace vitalink::interpreter {

struct ModelParams {
    double temperature = 1.0;
    double top_p = 1.0;
    std::string model_name = "gpt-4o-mini";

    /// Throws ConfigError unless temperature >= 0 and top_p in (0, 1].
    void validate() const;

    /// Sampling parameters of the waveform interpreter.
    static ModelParams interpreter_defaults() { return {1.3, 0.8, "gpt-4o-mini"}; }
};

/// Text-completion backend. Implementations throw ClientUnavailable when the
/// backend cannot be reached.
class ModelClient {
public:
    virtual ~ModelClient() = default;
    virtual std::string complete(const std::string& prompt, const ModelParams& params) = 0;
};

/// Adapts any callable.
class FunctionModelClient final : public ModelClient {
public:
    using Fn = std::function<std::string(const std::string&, const ModelParams&)>;
    explicit FunctionModelClient(Fn fn) : fn_(std::move(fn)) {}
    std::string complete(const std::string& prompt, const ModelParams& params) override {
        return fn_(prompt, params);
    }

private:
    Fn fn_;
};

/// Replays a fixed script of replies in order and records every call. A reply
/// equal to `kUnavailable` makes that call throw ClientUnavailable. Once the
/// script is exhausted the fallback reply (if any) repeats.
class ScriptedModelClient final : public ModelClient {
public:
    static constexpr const char* kUnavailable = "\x01unavailable";

    struct Call {
        std::string prompt;
        ModelParams params;
    };

    ScriptedModelClient() = default;
    explicit ScriptedModelClient(std::vector<std::string> script, std::string fallback = {});

    void push(std::string reply);
    void set_fallback(std::string reply);

    std::string complete(const std::string& prompt, const ModelParams& params) override;

    std::vector<Call> calls() const;
    std::size_t call_count() const;

private:
    mutable std::mutex mutex_;
    std::deque<std::string> script_;
    std::string fallback_;
    bool has_fallback_ = false;
    std::vector<Call> calls_;
};

}  // namespace vitalink::interpreter
