#include "vitalink/gateway/delivery.hpp"

#include <fstream>

#include "vitalink/agent_tools/scheduler.hpp"
#include "vitalink/error.hpp"

namespace vitalink::gateway {

void LoopbackTransport::send(const ChatEnvelope& envelope) {
    std::lock_guard lock(mutex_);
    if (!available_) throw TransportUnavailable("loopback transport is down");
    sent_.push_back(envelope);
}

LoopbackTransport::Page LoopbackTransport::since(std::size_t cursor, const std::string& phone) const {
    std::lock_guard lock(mutex_);
    Page page;
    for (std::size_t i = cursor; i < sent_.size(); ++i) {
        if (phone.empty() || sent_[i].user_phone == phone) page.envelopes.push_back(sent_[i]);
    }
    page.next_cursor = std::max(cursor, sent_.size());
    return page;
}

std::vector<ChatEnvelope> LoopbackTransport::all() const {
    std::lock_guard lock(mutex_);
    return sent_;
}

std::size_t LoopbackTransport::size() const {
    std::lock_guard lock(mutex_);
    return sent_.size();
}

void LoopbackTransport::set_available(bool available) {
    std::lock_guard lock(mutex_);
    available_ = available;
}

JsonlTransport::JsonlTransport(std::filesystem::path file) : file_(std::move(file)) {
    if (file_.has_parent_path()) std::filesystem::create_directories(file_.parent_path());
}

void JsonlTransport::send(const ChatEnvelope& envelope) {
    std::lock_guard lock(mutex_);
    std::ofstream out(file_, std::ios::app);
    out << nlohmann::json(envelope).dump() << '\n';
    out.flush();
    if (!out) throw TransportUnavailable("cannot append to " + file_.string());
}

Delivery::Delivery(Transport& transport, orchestrator::Store& store, agent_tools::MediaStore& media,
                   const Clock& clock)
    : transport_(transport), store_(store), media_(media), clock_(clock) {}

Delivery::~Delivery() { stop_retry_loop(); }

ChatEnvelope Delivery::send(ChatEnvelope envelope) {
    if (envelope.id.empty()) envelope.id = agent_tools::random_hex_id();
    envelope.direction = Direction::Outbound;
    envelope.ts = clock_.now();
    std::lock_guard lock(mutex_);
    store_.append_message(envelope.user_phone, envelope);
    auto& queue = pending_[envelope.user_phone];
    if (queue.empty()) {
        try {
            transport_.send(envelope);
            return envelope;
        } catch (const TransportUnavailable&) {
            // queued below
        }
    }
    queue.push_back(envelope);
    return envelope;
}

std::vector<ChatEnvelope> Delivery::deliver(const std::string& phone, const orchestrator::AgentOutput& output,
                                            const std::optional<std::string>& reply_to) {
    std::vector<ChatEnvelope> drafts;
    for (const auto& text : output.responses) {
        ChatEnvelope e;
        e.user_phone = phone;
        e.kind = EnvelopeKind::Text;
        e.body = text;
        drafts.push_back(std::move(e));
    }
    if (output.image) {
        const std::int64_t now = clock_.now();
        const agent_tools::ChartRequest req{phone, output.image->metric, now - output.image->hours * 3600LL, now,
                                            output.image->kind};
        ChatEnvelope e;
        e.user_phone = phone;
        try {
            e.media_id = agent_tools::render_chart(store_, media_, req);
            e.kind = EnvelopeKind::Image;
            e.body = chart_caption(*output.image);
        } catch (const NoData&) {
            e.kind = EnvelopeKind::Text;
            e.body = "I don't have enough readings from that period to draw a chart yet.";
        }
        drafts.push_back(std::move(e));
    }
    if (drafts.empty()) return {};
    drafts.back().buttons = output.questions;
    if (reply_to) drafts.front().reply_to = reply_to;

    std::vector<ChatEnvelope> sent;
    for (auto& d : drafts) sent.push_back(send(std::move(d)));
    return sent;
}

std::size_t Delivery::retry() {
    std::lock_guard lock(mutex_);
    std::size_t n = 0;
    for (auto& [phone, queue] : pending_) {
        while (!queue.empty()) {
            try {
                transport_.send(queue.front());
            } catch (const TransportUnavailable&) {
                break;
            }
            queue.pop_front();
            ++n;
        }
    }
    return n;
}

std::size_t Delivery::queued() const {
    std::lock_guard lock(mutex_);
    std::size_t n = 0;
    for (const auto& [_, q] : pending_) n += q.size();
    return n;
}

void Delivery::start_retry_loop(std::chrono::milliseconds period) {
    stop_retry_loop();
    {
        std::lock_guard lock(loop_mutex_);
        stopping_ = false;
    }
    loop_ = std::thread([this, period] {
        std::unique_lock lock(loop_mutex_);
        while (!loop_cv_.wait_for(lock, period, [this] { return stopping_; })) {
            lock.unlock();
            retry();
            lock.lock();
        }
    });
}

void Delivery::stop_retry_loop() {
    {
        std::lock_guard lock(loop_mutex_);
        stopping_ = true;
    }
    loop_cv_.notify_all();
    if (loop_.joinable()) loop_.join();
}

std::string chart_caption(const orchestrator::ImageRequest& image) {
    std::string metric;
    switch (image.metric) {
        case agent_tools::ChartMetric::Hr: metric = "heart rate"; break;
        case agent_tools::ChartMetric::Spo2: metric = "blood oxygen (SpO2)"; break;
        case agent_tools::ChartMetric::TempBody: metric = "body temperature"; break;
        case agent_tools::ChartMetric::TempAmbient: metric = "ambient temperature"; break;
        case agent_tools::ChartMetric::Activity: metric = "activity level"; break;
    }
    return "Your " + metric + " over the last " + std::to_string(image.hours) + " hours" +
           (image.kind == agent_tools::ChartKind::Histogram ? " as a histogram." : ".");
}

}  // namespace vitalink::gateway
