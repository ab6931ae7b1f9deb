#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "vitalink/agent_tools/media_store.hpp"
#include "vitalink/clock.hpp"
#include "vitalink/gateway/envelope.hpp"
#include "vitalink/orchestrator/orchestrator.hpp"
#include "vitalink/orchestrator/store.hpp"

namespace vitalink::gateway {

/// Hands an outbound envelope to the messaging channel. Throws
/// TransportUnavailable when the channel cannot take it right now.
class Transport {
public:
    virtual ~Transport() = default;
    virtual void send(const ChatEnvelope& envelope) = 0;
};

/// Records envelopes in send order; the companion UI and tests read them back
/// through a cursor.
class LoopbackTransport final : public Transport {
public:
    void send(const ChatEnvelope& envelope) override;

    struct Page {
        std::vector<ChatEnvelope> envelopes;
        std::size_t next_cursor = 0;
    };
    /// Envelopes at positions >= cursor, optionally only those for `phone`.
    /// next_cursor is the position after the last envelope recorded.
    Page since(std::size_t cursor, const std::string& phone = {}) const;
    std::vector<ChatEnvelope> all() const;
    std::size_t size() const;

    /// While down, send() throws TransportUnavailable.
    void set_available(bool available);

private:
    mutable std::mutex mutex_;
    std::vector<ChatEnvelope> sent_;
    bool available_ = true;
};

/// Appends each envelope as one JSON line to a file.
class JsonlTransport final : public Transport {
public:
    explicit JsonlTransport(std::filesystem::path file);
    void send(const ChatEnvelope& envelope) override;

private:
    std::filesystem::path file_;
    std::mutex mutex_;
};

/// Outbound delivery. Every envelope is recorded in the store before it is
/// offered to the transport. Envelopes the transport refuses wait in a
/// per-user queue; while a user's queue is non-empty later envelopes for that
/// user queue behind it, so per-user order is preserved across retries.
class Delivery final : public orchestrator::Dispatcher {
public:
    Delivery(Transport& transport, orchestrator::Store& store, agent_tools::MediaStore& media, const Clock& clock);
    ~Delivery() override;

    ChatEnvelope send(ChatEnvelope envelope) override;
    std::vector<ChatEnvelope> deliver(const std::string& phone, const orchestrator::AgentOutput& output,
                                      const std::optional<std::string>& reply_to) override;

    /// Offers queued envelopes again, oldest first per user. Returns how many
    /// went through.
    std::size_t retry();
    std::size_t queued() const;

    void start_retry_loop(std::chrono::milliseconds period = std::chrono::milliseconds(2000));
    void stop_retry_loop();

private:
    Transport& transport_;
    orchestrator::Store& store_;
    agent_tools::MediaStore& media_;
    const Clock& clock_;

    mutable std::mutex mutex_;
    std::map<std::string, std::deque<ChatEnvelope>> pending_;

    std::mutex loop_mutex_;
    std::condition_variable loop_cv_;
    bool stopping_ = false;
    std::thread loop_;
};

/// Caption for a chart envelope.
std::string chart_caption(const orchestrator::ImageRequest& image);

}  // namespace vitalink::gateway
