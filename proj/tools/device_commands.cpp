#include <httplib.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>

#include "commands.hpp"
#include "vitalink/error.hpp"
#include "vitalink/gateway/server.hpp"
#include "vitalink/wire/codec.hpp"
#include "vitalink/wire/device_simulator.hpp"
#include "vitalink/wire/synthetic.hpp"

namespace vitalink::cli {

namespace {

struct SimulateOptions {
    std::size_t cycles = 3;
    std::string preset = "normal";
    std::string device_id = "band-0001";
    std::int64_t start_ts = -1;  // -1 = now
    std::string out;
    std::string post;
    std::string token;
    bool anomaly = false;
    std::vector<std::size_t> offline;
    double scan_s = 0.0;
    int baud = 9600;
};

void post_bursts(const SimulateOptions& o, const std::vector<wire::SensorBurst>& bursts) {
    gateway::SensorUpload up;
    up.device_id = o.device_id;
    up.uploaded_at = std::chrono::duration_cast<std::chrono::seconds>(
                         std::chrono::system_clock::now().time_since_epoch())
                         .count();
    for (const auto& b : bursts) up.bursts.push_back({b, o.anomaly});
    httplib::Client client(o.post);
    client.set_read_timeout(120, 0);
    const httplib::Headers headers{{"Authorization", "Bearer " + o.token}};
    const auto res = client.Post("/v1/sensors", headers, gateway::to_json(up).dump(), "application/json");
    if (!res) throw Failure("cannot reach gateway at " + o.post + ": " + httplib::to_string(res.error()));
    std::cout << "POST /v1/sensors -> " << res->status << ' ' << res->body << '\n';
    if (res->status != 200) throw Failure("gateway rejected the upload", 2);
}

void simulate(const SimulateOptions& o) {
    wire::DeviceConfig config;
    config.device_id = o.device_id;
    config.scan_s = o.scan_s;
    config.baud = o.baud;
    config.start_ts = static_cast<std::uint32_t>(
        o.start_ts >= 0 ? o.start_ts
                        : std::chrono::duration_cast<std::chrono::seconds>(
                              std::chrono::system_clock::now().time_since_epoch())
                              .count());
    config.validate();
    if (!o.post.empty() && o.token.empty()) throw Failure("--post needs --token");

    auto vitals = wire::preset(o.preset);
    wire::DeviceSimulator sim(config);
    const std::set<std::size_t> offline(o.offline.begin(), o.offline.end());
    const auto reports = sim.run(
        [&](std::size_t cycle, std::uint32_t ts) {
            auto v = vitals;
            v.seed = vitals.seed + cycle;
            return wire::make_burst(v, ts, o.device_id);
        },
        o.cycles, [&](std::size_t cycle) { return !offline.contains(cycle); });

    std::ofstream out;
    if (!o.out.empty()) {
        out.open(o.out, std::ios::binary | std::ios::trunc);
        if (!out) throw Failure("cannot write " + o.out);
    }
    std::size_t written = 0;
    for (const auto& r : reports) {
        std::printf("cycle %zu:", r.cycle);
        for (const auto& span : r.trace) {
            std::printf(" %s %.3fs", std::string(wire::to_string(span.state)).c_str(), span.duration_s);
        }
        std::printf(" | packet %zu B, uplink %s, delivered %zu, buffered %zu\n", r.packet.size(),
                    r.uplink ? "yes" : "no", r.delivered.size(), r.buffered_after);
        std::vector<wire::SensorBurst> bursts;
        for (const auto& p : r.delivered) {
            if (out) out.write(reinterpret_cast<const char*>(p.data()), static_cast<std::streamsize>(p.size()));
            ++written;
            bursts.push_back(wire::decode(p, o.device_id));
        }
        if (!o.post.empty() && !bursts.empty()) post_bursts(o, bursts);
    }
    if (!reports.empty()) {
        std::printf("transmit time per packet: %.3f s at %d baud\n", sim.transmit_seconds(1), config.baud);
    }
    if (out) std::printf("wrote %zu packets to %s\n", written, o.out.c_str());
}

void decode_file(const std::string& path, bool full) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Failure("cannot read " + path);
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.size() % wire::kPacketBytes != 0) {
        std::fprintf(stderr, "warning: %zu trailing bytes ignored\n", bytes.size() % wire::kPacketBytes);
    }
    std::size_t bad = 0;
    for (std::size_t i = 0; i + wire::kPacketBytes <= bytes.size(); i += wire::kPacketBytes) {
        const auto index = i / wire::kPacketBytes;
        try {
            const auto b = wire::decode(std::span(bytes).subspan(i, wire::kPacketBytes));
            if (full) {
                gateway::SensorUpload up{.device_id = "-", .uploaded_at = 0, .bursts = {{b, false}}};
                std::cout << gateway::to_json(up)["bursts"][0].dump() << '\n';
            } else {
                std::printf("packet %zu: ts=%u ir[0]=%u red[0]=%u accel_z[0]=%d temp_wrist[0]=%.2fC\n", index, b.ts,
                            b.ir[0], b.red[0], b.accel_z[0], b.temp_wrist[0] / 100.0);
            }
        } catch (const Error& e) {
            ++bad;
            std::printf("packet %zu: %s\n", index, e.what());
        }
    }
    if (bad) throw Failure(std::to_string(bad) + " packet(s) failed to decode", 2);
}

}  // namespace

void add_simulate_device(CLI::App& app) {
    auto o = std::make_shared<SimulateOptions>();
    auto* cmd = app.add_subcommand("simulate-device", "Run the band's acquisition cycle and emit packets");
    cmd->add_option("--cycles", o->cycles, "Number of Reset/Scan/Collect/Transmit cycles")->capture_default_str();
    cmd->add_option("--preset", o->preset, "Synthetic vitals: normal, high-hr, low-spo2, walk, run")
        ->capture_default_str();
    cmd->add_option("--device-id", o->device_id, "Device id attached by the uplink")->capture_default_str();
    cmd->add_option("--start-ts", o->start_ts, "Unix time of the first Collect (default: now)");
    cmd->add_option("--scan-s", o->scan_s, "Advertising time before Collect")->capture_default_str();
    cmd->add_option("--baud", o->baud, "UART rate of the radio link")->capture_default_str();
    cmd->add_option("--offline", o->offline, "Cycles without a phone in range (packets stay buffered)");
    cmd->add_option("--out", o->out, "Append delivered packets to this binary file");
    cmd->add_option("--post", o->post, "Gateway base URL, e.g. http://127.0.0.1:8080");
    cmd->add_option("--token", o->token, "Bearer token from /v1/signup, for --post");
    cmd->add_flag("--anomaly", o->anomaly, "Mark uploaded bursts with the app's anomaly flag");
    cmd->callback([o] { simulate(*o); });
}

void add_decode(CLI::App& app) {
    auto path = std::make_shared<std::string>();
    auto full = std::make_shared<bool>(false);
    auto* cmd = app.add_subcommand("decode", "Decode a file of concatenated packets");
    cmd->add_option("file", *path, "Packet file")->required();
    cmd->add_flag("--json", *full, "Print every burst as JSON");
    cmd->callback([path, full] { decode_file(*path, *full); });
}

}  // namespace vitalink::cli
