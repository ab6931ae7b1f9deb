#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <thread>

#include "commands.hpp"
#include "vitalink/agent_tools/media_store.hpp"
#include "vitalink/agent_tools/retrieval.hpp"
#include "vitalink/agent_tools/scheduler.hpp"
#include "vitalink/clock.hpp"
#include "vitalink/config.hpp"
#include "vitalink/gateway/delivery.hpp"
#include "vitalink/gateway/server.hpp"
#include "vitalink/gateway/transcriber.hpp"
#include "vitalink/orchestrator/orchestrator.hpp"
#include "vitalink/orchestrator/store.hpp"

namespace vitalink::cli {

namespace {

std::atomic<bool> g_stop{false};

extern "C" void on_signal(int) { g_stop.store(true); }

struct ServeOptions {
    std::string config;
    int port = -1;  // -1 = from config
    std::string data_dir;
    std::string transport;
    std::string client;
};

void serve(const ServeOptions& o) {
    auto cfg = o.config.empty() ? ServiceConfig{} : load_config(o.config);
    if (o.port >= 0) cfg.gateway.port = o.port;
    if (!o.data_dir.empty()) cfg.data_dir = o.data_dir;
    if (!o.transport.empty()) cfg.transport = o.transport;
    if (!o.client.empty()) cfg.model_client = o.client;
    if (cfg.transport != "loopback" && cfg.transport != "jsonl") throw Failure("--transport must be loopback or jsonl");
    if (cfg.transport == "jsonl" && cfg.data_dir.empty() && cfg.transport_file.is_relative()) {
        throw Failure("the jsonl transport needs a data directory");
    }

    std::unique_ptr<orchestrator::JsonlStore> store;
    std::unique_ptr<agent_tools::MediaStore> media;
    if (cfg.data_dir.empty()) {
        store = std::make_unique<orchestrator::JsonlStore>();
        media = std::make_unique<agent_tools::MediaStore>();
    } else {
        store = std::make_unique<orchestrator::JsonlStore>(cfg.data_dir);
        media = std::make_unique<agent_tools::MediaStore>(cfg.data_dir / "media");
    }

    gateway::LoopbackTransport loopback;
    std::unique_ptr<gateway::JsonlTransport> jsonl;
    gateway::Transport* transport = &loopback;
    if (cfg.transport == "jsonl") {
        jsonl = std::make_unique<gateway::JsonlTransport>(cfg.data_dir / cfg.transport_file);
        transport = jsonl.get();
    }

    SystemClock clock;
    gateway::Delivery delivery(*transport, *store, *media, clock);
    auto model = make_model_client(cfg.model_client, cfg.model_timeout_s);
    orchestrator::Orchestrator orch(*store, *model, delivery, clock, cfg.orchestrator);

    gateway::StubTranscriber transcriber(*media);
    orch.set_transcriber(std::ref(transcriber));
    if (cfg.classifier == "model") {
        interpreter::ModelParams params;
        params.model_name = cfg.orchestrator.router.router_model;
        orch.set_classifier(
            std::make_shared<router::ModelClassifier>(*model, params, cfg.orchestrator.router.rules));
    }

    agent_tools::KnowledgeIndex knowledge;
    auto corpus = cfg.corpus_dir;
    if (corpus.empty() && std::filesystem::is_directory(VITALINK_DATA_DIR "/corpus")) corpus = VITALINK_DATA_DIR "/corpus";
    if (!corpus.empty()) {
        const auto n = knowledge.load_directory(corpus, agent_tools::PassageSource::GeneralCorpus);
        std::printf("knowledge: %zu documents from %s\n", n, corpus.c_str());
        orch.set_knowledge(&knowledge);
    }

    agent_tools::Scheduler scheduler(*store, clock,
                                     [&](const agent_tools::ScheduledTask& task, std::int64_t instant) { orch.run_task(task, instant); });
    gateway::Gateway gw(cfg.gateway, *store, orch, delivery, *media, clock,
                        cfg.transport == "loopback" ? &loopback : nullptr);

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    scheduler.start(cfg.scheduler_period);
    const int port = gw.start();
    std::printf("listening on %s:%d (transport %s, model %s, state %s)\n", cfg.gateway.host.c_str(), port,
                cfg.transport.c_str(), cfg.model_client.c_str(),
                cfg.data_dir.empty() ? "in memory" : cfg.data_dir.c_str());
    std::fflush(stdout);
    while (!g_stop.load()) std::this_thread::sleep_for(std::chrono::milliseconds(100));
    std::printf("shutting down\n");
    gw.stop();
    scheduler.stop();
}

}  // namespace

void add_serve(CLI::App& app) {
    auto o = std::make_shared<ServeOptions>();
    auto* cmd = app.add_subcommand("serve", "Run the HTTP gateway, orchestrator and scheduler");
    cmd->add_option("--config", o->config, "Service config file");
    cmd->add_option("--port", o->port, "Listen port (0 picks a free one; default from config)");
    cmd->add_option("--data-dir", o->data_dir, "Persist state here (default from config, else memory)");
    cmd->add_option("--transport", o->transport, "loopback or jsonl (default from config)");
    cmd->add_option("--client", o->client, "Model client: stub or live (default from config)");
    cmd->callback([o] { serve(*o); });
}

}  // namespace vitalink::cli
