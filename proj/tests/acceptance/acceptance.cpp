// Acceptance suite: one PASS/FAIL line per criterion. Runs offline with the
// stub model; exits non-zero when any criterion fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "support/oracles.hpp"
#include "vitalink/agent_tools/scheduler.hpp"
#include "vitalink/agent_tools/tools.hpp"
#include "vitalink/clock.hpp"
#include "vitalink/dsp/conventional.hpp"
#include "vitalink/dsp/filter.hpp"
#include "vitalink/error.hpp"
#include "vitalink/eval/comparison.hpp"
#include "vitalink/gateway/delivery.hpp"
#include "vitalink/gateway/server.hpp"
#include "vitalink/interpreter/interpreter.hpp"
#include "vitalink/mock/mock_model.hpp"
#include "vitalink/orchestrator/agent_output.hpp"
#include "vitalink/orchestrator/orchestrator.hpp"
#include "vitalink/orchestrator/prompts.hpp"
#include "vitalink/router/router.hpp"
#include "vitalink/wire/codec.hpp"
#include "vitalink/wire/crc16.hpp"
#include "vitalink/wire/device_simulator.hpp"
#include "vitalink/wire/synthetic.hpp"

using namespace vitalink;
using nlohmann::json;

namespace {

constexpr std::int64_t kT0 = 1'767'225'600;  // 2026-01-01T00:00:00Z
constexpr std::int64_t kDay = 86400;

/// Collects failed expectations of one criterion; `note` adds measured values
/// to the report line.
struct Check {
    std::vector<std::string> failures;
    std::vector<std::string> notes;

    bool expect(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
        return ok;
    }
    void note(const std::string& text) { notes.push_back(text); }
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

struct Criterion {
    std::string name;
    double budget_s;  // runtime limit, 0 = none
    std::function<void(Check&)> run;
    std::function<std::optional<std::string>()> skip_reason = [] { return std::nullopt; };
};

// ---------------------------------------------------------------- wire

void wire_codec(Check& c) {
    c.expect(wire::crc16_ccitt_false("123456789") == 0x29B1, "CRC check value of \"123456789\" is not 0x29B1");

    std::mt19937_64 rng(4242);
    int exact = 0;
    for (int i = 0; i < 100; ++i) {
        auto b = oracle::random_burst(rng);
        b.device_id = "band-" + std::to_string(i);
        exact += wire::decode(wire::encode(b), b.device_id) == b;
    }
    c.expect(exact == 100, std::to_string(100 - exact) + " of 100 round trips differ");

    const auto bytes = wire::encode(wire::make_burst({}, 42));
    std::size_t detected = 0;
    for (std::size_t bit = 0; bit < bytes.size() * 8; ++bit) {
        auto corrupted = bytes;
        corrupted[bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        try {
            (void)wire::decode(corrupted);
        } catch (const ChecksumMismatch&) {
            ++detected;
        }
    }
    c.expect(detected == bytes.size() * 8, std::to_string(bytes.size() * 8 - detected) + " bit flips undetected");
    c.note(std::to_string(detected) + "/" + std::to_string(bytes.size() * 8) + " bit flips caught");
}

void device_simulator(Check& c) {
    wire::DeviceSimulator sim({});
    const auto reports = sim.run([](std::size_t, std::uint32_t ts) { return wire::make_burst({}, ts); }, 5);
    const std::vector<wire::DeviceState> order = {wire::DeviceState::Reset, wire::DeviceState::Scan,
                                                  wire::DeviceState::Collect, wire::DeviceState::Transmit};
    for (const auto& r : reports) {
        std::vector<wire::DeviceState> states;
        for (const auto& s : r.trace) states.push_back(s.state);
        c.expect(states == order, "cycle " + std::to_string(r.cycle) + " trace is not Reset, Scan, Collect, Transmit");
    }
    const double t = reports.front().transmit_s;
    c.note("transmit " + fmt("%.3f s", t) + ", target 7.4 +/- 0.5 s");
    c.expect(std::abs(t - 7.4) <= 0.5, "default cycle transmits in " + fmt("%.3f s", t) + ", outside 7.4 +/- 0.5 s");
}

// ---------------------------------------------------------------- dsp

wire::SensorBurst sinusoid(double f_hz) {
    auto b = wire::SensorBurst::zeroed();
    for (std::size_t i = 0; i < wire::kPpgSamples; ++i) {
        const double s = std::sin(2.0 * std::numbers::pi * f_hz * static_cast<double>(i) / wire::kPpgRateHz);
        b.ir[i] = static_cast<std::uint16_t>(std::lround(20000.0 + 400.0 * s));
        b.red[i] = static_cast<std::uint16_t>(std::lround(16000.0 + 192.0 * s));
    }
    return b;
}

void dsp_criterion(Check& c) {
    const auto bp = dsp::design_filter(dsp::FilterSpec::band_pass(0.5, 2.5, 31.0));
    for (double f : {0.0, 1e-4}) {
        const double mag = std::abs(dsp::frequency_response(bp, f, 31.0));
        c.expect(mag <= 0.01, "band-pass gain at " + fmt("%g Hz", f) + " is " + fmt("%g", mag) + " (> -40 dB)");
    }

    const auto est = dsp::estimate_conventional(sinusoid(1.2));
    c.expect(est.hr_valid && std::abs(*est.hr_bpm - 72.0) <= 2.0, "1.2 Hz PPG does not give 72 +/- 2 BPM");
    if (est.hr_bpm) c.note("1.2 Hz -> " + fmt("%.2f BPM", *est.hr_bpm));

    auto flat = wire::SensorBurst::zeroed();
    std::fill(flat.ir.begin(), flat.ir.end(), 20000);
    std::fill(flat.red.begin(), flat.red.end(), 16000);
    c.expect(!dsp::estimate_conventional(flat).valid(), "flat line is reported valid");

    std::vector<dsp::ConventionalEstimate> results(10);
    for (std::size_t i = 0; i < 7; ++i) results[i].hr_valid = results[i].spo2_valid = true;
    c.expect(dsp::availability(results) == 70.0, "availability of 7 valid and 3 invalid is not exactly 70.0");

    double worst = 0.0;
    for (int step = 0; step <= 230; ++step) {
        const double f = 0.7 + 0.01 * step;
        const auto e = dsp::estimate_conventional(sinusoid(f));
        if (!c.expect(e.hr_valid, "sweep " + fmt("%.2f Hz", f) + " is invalid")) continue;
        worst = std::max(worst, std::abs(*e.hr_bpm - 60.0 * f));
    }
    c.expect(worst <= 3.0, "sweep error reaches " + fmt("%.2f BPM", worst));
    c.note("sweep max error " + fmt("%.2f BPM", worst));
}

// ---------------------------------------------------------------- router

std::string random_query(std::mt19937_64& rng) {
    static const std::vector<std::string> words = {
        "heart", "rate", "trend", "week", "chest", "pain", "sleep", "water", "summary", "oxygen",
        "dizzy", "walk", "today", "compare", "month", "fine", "tired", "breath", "run", "fever"};
    std::uniform_int_distribution<int> len(1, 80);
    std::uniform_int_distribution<std::size_t> pick(0, words.size() - 1);
    std::string q;
    for (int i = 0, n = len(rng); i < n; ++i) q += (i ? " " : "") + words[pick(rng)];
    return q;
}

void router_criterion(Check& c) {
    using namespace router;
    c.expect(estimate_tokens(std::string(400, 'a')) == 100, "400 characters do not estimate to 100 tokens");

    const auto table = PriceTable::defaults();
    const std::map<std::string, double, std::less<>> published = {
        {"gpt-4o-mini", 0.00015}, {"gpt-3.5-turbo", 0.001}, {"o3-mini", 0.00125}, {"o1", 0.015}};
    c.expect(table.per_1k_usd == published, "price table differs from the published list prices");

    const std::string q100(400, 'a');
    const double simple = cost(q100, Tier::Simple, table, false).total_usd;
    const double base = baseline_cost(q100, table).total_usd;
    c.expect(std::abs(simple - 0.000015) < 1e-12, "100 tokens on Simple cost " + fmt("%.9g", simple));
    c.expect(std::abs(base - 0.0015) < 1e-12, "100 tokens on the baseline cost " + fmt("%.9g", base));

    HeuristicClassifier classifier;
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<int> size(1, 40);
    int violations = 0;
    for (int set = 0; set < 1000; ++set) {
        std::vector<std::string> qs;
        for (int i = 0, n = size(rng); i < n; ++i) qs.push_back(random_query(rng));
        const auto s = cost_study(qs, table, classifier);
        violations += s.total_tiered > s.total_baseline + 1e-15;
    }
    c.expect(violations == 0, std::to_string(violations) + " of 1000 sets cost more tiered than baseline");

    const auto study = cost_study(load_queries(VITALINK_DATA_DIR "/queries_sample.txt"), table, classifier);
    c.expect(study.relative_reduction() > 0.0, "bundled sample shows no reduction");
    c.note("bundled 30 queries: reduction " + fmt("%.2f%%", 100.0 * study.relative_reduction()) +
           " (reference 56.57% on an unpublished set)");
}

// ---------------------------------------------------------------- interpreter

void interpreter_criterion(Check& c) {
    using namespace interpreter;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> hr(kMinHr, kMaxHr), spo2(kMinSpo2, kMaxSpo2), temp(-10.0, 45.0);
    std::bernoulli_distribution present(0.7);
    int mismatched = 0;
    for (int i = 0; i < 1000; ++i) {
        VitalEstimate e;
        if (present(rng)) e.hr = hr(rng);
        if (present(rng)) e.spo2 = spo2(rng);
        if (present(rng)) e.activity = "walk";
        if (present(rng)) e.activity_verbose = "Walking at an easy pace.";
        if (present(rng)) e.temp_body = temp(rng);
        if (present(rng)) e.temp_ambient = temp(rng);
        mismatched += !(parse_reply(serialize_reply(e)) == e);
    }
    c.expect(mismatched == 0, std::to_string(mismatched) + " of 1000 estimates do not round-trip");

    const auto na = parse_reply(
        R"({"hr":"N/A","spo2":97,"activity":"N/A","activity_verbose":"Resting.","temp_body":"N/A","temp_ambient":24})");
    c.expect(!na.hr && !na.activity && !na.temp_body && na.spo2 == 97.0 && na.temp_ambient == 24.0,
             "\"N/A\" does not map to absent fields");
    bool prose_rejected = false;
    try {
        (void)parse_reply("The heart rate looks like about 72 BPM.");
    } catch (const MalformedReply&) {
        prose_rejected = true;
    }
    c.expect(prose_rejected, "prose reply is not rejected with MalformedReply");

    oracle::TempDir dir;
    eval::make_synthetic_dataset(dir.path(), {.subjects = 2, .seconds = 20.0, .seed = 3});
    const auto records = eval::ingest(dir.path());
    std::vector<eval::Segment> segments;
    for (std::size_t i = 0; i < records.size(); ++i) {
        auto s = eval::segment(records[i], i);
        segments.insert(segments.end(), s.begin(), s.end());
    }
    auto echo = eval::reference_echo_client(segments);
    const auto report = eval::run_comparison(records, *echo, {.threads = 4});
    c.expect(report.segments.size() == segments.size(), "comparison dropped windows");
    c.expect(report.llm.hr_mae == 0.0 && report.llm.spo2_mae == 0.0, "reference-echo client has non-zero MAE");
    c.expect(report.llm.availability_pct == 100.0, "reference-echo client availability is not 100%");

    // Coverage: every burst yields exactly one estimate, whatever the stub says.
    mock::MockModelClient stub;
    std::mt19937_64 brng(11);
    std::set<std::uint32_t> seen;
    std::size_t estimates = 0;
    for (std::uint32_t i = 0; i < 10'000; ++i) {
        wire::SensorBurst b;
        if (i % 3 == 0) {
            b = oracle::random_burst(brng);
        } else {
            wire::SyntheticVitals v;
            v.hr_bpm = 40.0 + static_cast<double>(i % 140);
            v.spo2_pct = 85.0 + static_cast<double>(i % 15);
            v.motion_amplitude_g = (i % 2) ? 1.5 : 0.0;
            v.motion_freq_hz = 2.0;
            v.seed = i;
            b = wire::make_burst(v);
        }
        b.ts = i;
        const auto out = interpret_with_fallback(b, stub, ModelParams::interpreter_defaults());
        ++estimates;
        seen.insert(out.estimate.burst_ts);
    }
    c.expect(estimates == 10'000 && seen.size() == 10'000, "10,000 stub bursts did not yield 10,000 estimates");
    c.note("10,000 stub bursts -> " + std::to_string(seen.size()) + " estimates");
}

// ---------------------------------------------------------------- orchestrator

/// Stub that lets the QC and agent replies be scripted; everything else goes
/// to the offline mock.
struct ScriptedModel final : interpreter::ModelClient {
    std::function<std::string(const std::string&)> interpret, qc, agent;
    mock::MockModelClient fallback;

    std::string complete(const std::string& prompt, const interpreter::ModelParams& params) override {
        if (interpret && prompt.starts_with(interpreter::instruction_block())) return interpret(prompt);
        if (qc && prompt.starts_with(orchestrator::prompts::kQcReview)) return qc(prompt);
        if (agent && prompt.find(orchestrator::prompts::kSchema) != std::string::npos &&
            !prompt.starts_with(orchestrator::prompts::kQcReview)) {
            return agent(prompt);
        }
        return fallback.complete(prompt, params);
    }
};

struct OrchRig {
    orchestrator::JsonlStore store;
    ManualClock clock{kT0};
    agent_tools::MediaStore media;
    gateway::LoopbackTransport transport;
    gateway::Delivery delivery{transport, store, media, clock};
    ScriptedModel model;
    std::unique_ptr<orchestrator::Orchestrator> orch;

    explicit OrchRig(orchestrator::OrchestratorConfig cfg = {}) {
        orch = std::make_unique<orchestrator::Orchestrator>(store, model, delivery, clock, cfg);
    }

    void add_user(const std::string& phone) {
        orchestrator::UserProfile u;
        u.phone = phone;
        u.device_id = "dev" + phone;
        u.name = "Ana";
        u.age = 40;
        u.profile_complete = true;
        u.welcomed = true;
        u.created_at = kT0;
        store.put_user(u);
    }

    gateway::ChatEnvelope text(const std::string& phone, const std::string& body) {
        gateway::ChatEnvelope e;
        e.id = agent_tools::random_hex_id();
        e.user_phone = phone;
        e.ts = clock.now();
        e.body = body;
        return e;
    }
};

std::string agent_json(const std::vector<std::string>& responses) {
    return json{{"PERSONAL", false}, {"IMAGE", nullptr}, {"URGENCY", "not_urgent"},
                {"RESPONSES", responses}, {"QUESTIONS", json::array()}}
        .dump();
}

std::string vitals_reply(double hr, double spo2, double temp) {
    interpreter::VitalEstimate e;
    e.hr = hr;
    e.spo2 = spo2;
    e.activity = "sit";
    e.activity_verbose = "Sitting quietly.";
    e.temp_body = temp;
    e.temp_ambient = 24.0;
    return interpreter::serialize_reply(e);
}

void schema_checks(Check& c) {
    using orchestrator::enforce_schema;
    const json valid = json::parse(agent_json({"Hello!"}));
    auto rejects = [](const std::string& text) {
        try {
            (void)enforce_schema(text);
            return false;
        } catch (const SchemaViolation&) {
            return true;
        }
    };
    c.expect(!rejects(valid.dump()), "a valid agent object is rejected");
    for (const char* f : {"PERSONAL", "IMAGE", "URGENCY", "RESPONSES", "QUESTIONS"}) {
        json j = valid;
        j.erase(f);
        c.expect(rejects(j.dump()), std::string("missing ") + f + " is accepted");
    }
    json extra = valid;
    extra["MOOD"] = "calm";
    c.expect(rejects(extra.dump()), "an unknown field is accepted");
    json bad_urgency = valid;
    bad_urgency["URGENCY"] = "maybe";
    c.expect(rejects(bad_urgency.dump()), "an invalid URGENCY is accepted");
    json empty_responses = valid;
    empty_responses["RESPONSES"] = json::array();
    c.expect(rejects(empty_responses.dump()), "empty RESPONSES is accepted");
    c.expect(rejects("Your readings look fine."), "prose is accepted");
}

void qc_precedence(Check& c) {
    orchestrator::OrchestratorConfig cfg;
    cfg.alert_cooldown_s = 0;
    OrchRig rig(cfg);
    std::mt19937 rng(7);
    const std::vector<std::string> verdicts = {
        R"({"verdict":"approve","reason":"ok"})", R"({"verdict":"reject","reason":"unsupported"})",
        R"({"verdict":"revise","reason":"tone","revised":"Please rest and recheck soon."})", "garbled", ""};
    std::string vitals, verdict;
    rig.model.interpret = [&](const std::string&) { return vitals; };
    rig.model.qc = [&](const std::string&) -> std::string {
        if (verdict.empty()) throw ClientUnavailable("reviewer down");
        return verdict;
    };
    std::uniform_real_distribution<double> hr(40.0, 150.0), spo2(86.0, 99.0), temp(36.0, 39.0);
    for (int s = 0; s < 50; ++s) {
        const std::string p = "+1555300" + std::to_string(1000 + s);
        rig.add_user(p);
        verdict = verdicts[rng() % verdicts.size()];
        for (int i = 0, n = 3 + static_cast<int>(rng() % 4); i < n; ++i) {
            vitals = vitals_reply(hr(rng), spo2(rng), temp(rng));
            rig.orch->handle_sensor_burst(
                wire::make_burst(wire::preset("normal"), static_cast<std::uint32_t>(kT0 + 240 * i), "dev" + p),
                rng() % 2);
            rig.clock.advance(240);
        }
        rig.orch->evaluate_pending();
    }

    struct Event {
        std::int64_t seq;
        std::string phone, kind, id;
    };
    std::vector<Event> events;
    std::set<std::string> alerts;
    for (const auto& a : rig.store.audit()) {
        events.push_back({a.seq, a.phone, a.event, {}});
        if (a.event == "alert_delivered") alerts.insert(a.details.at("message_id").get<std::string>());
    }
    for (const auto& u : rig.store.users()) {
        for (const auto& m : rig.store.messages(u.phone)) {
            events.push_back({m.seq, u.phone, "message", m.envelope.at("id").get<std::string>()});
        }
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.seq < b.seq; });
    std::map<std::string, int> open_reviews;
    std::size_t preceded = 0, unreviewed = 0;
    for (const auto& e : events) {
        if (e.kind == "qc_review") ++open_reviews[e.phone];
        if (e.kind == "message" && alerts.contains(e.id)) {
            if (open_reviews[e.phone] > 0) {
                --open_reviews[e.phone];
                ++preceded;
            } else {
                ++unreviewed;
            }
        }
    }
    c.expect(unreviewed == 0, std::to_string(unreviewed) + " urgent deliveries without a prior QC record");
    c.expect(!alerts.empty(), "no urgent deliveries were produced");
    c.expect(rig.transport.size() == alerts.size(), "transport carries messages that are not reviewed alerts");
    c.note(std::to_string(preceded) + " urgent deliveries, each after a QC record");
}

void ordering(Check& c) {
    OrchRig rig;
    rig.model.agent = [](const std::string& prompt) {
        const auto pos = prompt.find("User message: ");
        const auto start = pos + 14;
        const auto m = prompt.substr(start, prompt.find('\n', start) - start);
        return agent_json({m + "/1", m + "/2", m + "/3"});
    };
    std::vector<std::string> phones;
    for (int u = 0; u < 8; ++u) {
        phones.push_back("+1555400000" + std::to_string(u));
        rig.add_user(phones.back());
    }
    std::vector<std::thread> threads;
    for (int u = 0; u < 8; ++u) {
        threads.emplace_back([&, u] {
            for (int i = 0; i < 20; ++i) rig.orch->handle_user_message(rig.text(phones[u], "m" + std::to_string(i)));
        });
    }
    for (auto& t : threads) t.join();
    std::size_t wrong = 0;
    for (const auto& p : phones) {
        std::vector<std::string> bodies;
        for (const auto& e : rig.transport.all()) {
            if (e.user_phone == p) bodies.push_back(e.body);
        }
        std::vector<std::string> expected;
        for (int i = 0; i < 20; ++i) {
            for (int k = 1; k <= 3; ++k) expected.push_back("m" + std::to_string(i) + "/" + std::to_string(k));
        }
        wrong += bodies != expected;
    }
    c.expect(wrong == 0, std::to_string(wrong) + " of 8 users saw out-of-order messages");
}

void duplicate_signup(Check& c) {
    orchestrator::JsonlStore store;
    ManualClock clock{kT0};
    agent_tools::MediaStore media;
    gateway::LoopbackTransport transport;
    gateway::Delivery delivery{transport, store, media, clock};
    mock::MockModelClient model;
    orchestrator::Orchestrator orch{store, model, delivery, clock};
    gateway::GatewayConfig cfg;
    cfg.pbkdf2_iterations = 1000;
    cfg.token_secret = "acceptance";
    gateway::Gateway gw(cfg, store, orch, delivery, media, clock, &transport);
    std::atomic<int> created{0};
    std::vector<std::thread> threads;
    for (int i = 0; i < 12; ++i) {
        threads.emplace_back([&] {
            if (gw.signup(R"({"phone":"+15554440000","passcode":"1234"})").status == 201) ++created;
        });
    }
    for (auto& t : threads) t.join();
    std::size_t welcomes = 0;
    for (const auto& a : store.audit()) welcomes += a.event == "welcome_sent";
    c.expect(created == 1, std::to_string(created.load()) + " of 12 duplicate sign-ups created a user");
    c.expect(welcomes == 1, std::to_string(welcomes) + " welcome messages for one user");
}

void orchestrator_criterion(Check& c) {
    schema_checks(c);
    qc_precedence(c);
    ordering(c);
    duplicate_signup(c);
}

// ---------------------------------------------------------------- scheduler

void scheduler_criterion(Check& c) {
    oracle::TempDir dir;
    ManualClock clock(kT0);
    std::vector<std::int64_t> fires;
    auto handler = [&](const agent_tools::ScheduledTask&, std::int64_t t) { fires.push_back(t); };
    {
        orchestrator::JsonlStore store(dir.path());
        agent_tools::Scheduler s(store, clock, handler);
        s.schedule({.user = "+15550000001", .cron_expr = "0 9 * * *"});
        for (; clock.now() < kT0 + 12 * kDay + 7200; clock.advance(900)) s.tick();
    }
    {
        orchestrator::JsonlStore store(dir.path());  // simulated restart
        agent_tools::Scheduler s(store, clock, handler);
        for (; clock.now() <= kT0 + 30 * kDay; clock.advance(900)) s.tick();
    }
    std::vector<std::int64_t> expected;
    for (int d = 0; d < 30; ++d) expected.push_back(kT0 + d * kDay + 9 * 3600);
    c.expect(fires == expected, std::to_string(fires.size()) + " fires over 30 days, expected one per day at 09:00");
    c.note(std::to_string(fires.size()) + " daily fires across one restart");

    orchestrator::JsonlStore store;
    orchestrator::UserProfile u;
    u.phone = "+15550000002";
    u.name = "Ana";
    store.put_user(u);
    interpreter::VitalEstimate e;
    e.burst_ts = static_cast<std::uint32_t>(kT0);
    e.hr = 70.0;
    store.append_vital(u.phone, e, false, false);
    c.expect(!agent_tools::fire_no_data_check(store, u.phone, kT0 + 6 * 3600), "reminder fires at exactly 6 h");
    c.expect(agent_tools::fire_no_data_check(store, u.phone, kT0 + 6 * 3600 + 1).has_value(),
             "no reminder one second after 6 h");
}

// ---------------------------------------------------------------- eval

void eval_criterion(Check& c) {
    std::vector<double> x(997);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (auto& v : x) v = u(rng);
    const auto same = eval::downsample(x, 31.0, 31.0);
    c.expect(same == x, "downsampling at equal rates is not the identity");

    std::vector<double> ramp(4000);
    for (std::size_t i = 0; i < ramp.size(); ++i) ramp[i] = 2.0 + 0.5 * static_cast<double>(i) / 1000.0;
    const auto down = eval::downsample(ramp, 1000.0, 31.0);
    c.expect(down.size() == 124, "4 s at 1000 Hz gives " + std::to_string(down.size()) + " samples at 31 Hz");
    double worst = 0.0;
    for (std::size_t k = 0; k < down.size(); ++k) {
        worst = std::max(worst, std::abs(down[k] - (2.0 + 0.5 * static_cast<double>(k) / 31.0)));
    }
    c.expect(worst < 1e-9, "linear ramp error " + fmt("%g", worst));

    oracle::TempDir dir;
    eval::make_synthetic_dataset(dir.path(), {.subjects = 2, .seconds = 24.0, .seed = 9});
    mock::MockModelClient stub;
    auto render = [&](unsigned threads) {
        const auto r = eval::run_comparison(dir.path(), stub, {.threads = threads});
        return eval::to_json(r).dump(2) + eval::per_subject_deltas_csv(r) + eval::error_density_csv(r) +
               eval::confusion_csv(r) + eval::estimates_csv(r);
    };
    const auto a = render(1), b = render(8), again = render(8);
    c.expect(a == b && b == again, "stub-client report differs between runs");
    c.note("report " + std::to_string(a.size()) + " bytes, identical across 3 runs");
}

std::optional<std::string> dataset_missing() {
    const char* dir = std::getenv("VITALINK_PTT_DATASET");
    if (!dir || !*dir) return "VITALINK_PTT_DATASET not set";
    return std::nullopt;
}

void dataset_criterion(Check& c) {
    mock::MockModelClient stub;
    const auto report = eval::run_comparison(std::filesystem::path(std::getenv("VITALINK_PTT_DATASET")), stub);
    using Ref = eval::PublishedReference;
    c.expect(report.conventional.availability_pct < 100.0, "conventional availability is 100%");
    auto show = [](const std::optional<double>& v) { return v ? fmt("%.2f", *v) : std::string("n/a"); };
    c.note(std::to_string(report.segments.size()) + " windows (reference " + std::to_string(Ref::traces) + ")");
    c.note("HR MAE conv " + show(report.conventional.hr_mae) + "/" + fmt("%.2f", Ref::conventional_hr_mae) +
           ", llm " + show(report.llm.hr_mae) + "/" + fmt("%.2f", Ref::llm_hr_mae));
    c.note("SpO2 MAE conv " + show(report.conventional.spo2_mae) + "/" + fmt("%.2f", Ref::conventional_spo2_mae) +
           ", llm " + show(report.llm.spo2_mae) + "/" + fmt("%.2f", Ref::llm_spo2_mae));
    c.note("availability conv " + fmt("%.2f", report.conventional.availability_pct) + "/" +
           fmt("%.2f", Ref::conventional_availability_pct) + ", llm " + fmt("%.2f", report.llm.availability_pct) +
           "/" + fmt("%.2f", Ref::llm_availability_pct));
    c.note("activity conv " + fmt("%.2f", report.conventional.activity_accuracy_pct) + "/" +
           fmt("%.2f", Ref::conventional_activity_pct) + ", llm " + fmt("%.2f", report.llm.activity_accuracy_pct) +
           "/" + fmt("%.2f", Ref::llm_activity_pct));
}

std::string join(const std::vector<std::string>& parts, const char* sep) {
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : sep) + p;
    return out;
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"wire codec", 5.0, wire_codec},
        {"device simulator", 0.0, device_simulator},
        {"dsp", 30.0, dsp_criterion},
        {"router/cost", 0.0, router_criterion},
        {"interpreter", 0.0, interpreter_criterion},
        {"orchestrator", 0.0, orchestrator_criterion},
        {"scheduler", 0.0, scheduler_criterion},
        {"eval harness (offline)", 0.0, eval_criterion},
        {"eval harness (dataset)", 0.0, dataset_criterion, dataset_missing},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        if (auto why = cr.skip_reason()) {
            std::printf("SKIP  %s: %s\n", cr.name.c_str(), why->c_str());
            continue;
        }
        Check check;
        const auto start = std::chrono::steady_clock::now();
        try {
            cr.run(check);
        } catch (const std::exception& e) {
            check.failures.push_back(std::string("threw: ") + e.what());
        }
        const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (cr.budget_s > 0 && elapsed > cr.budget_s) {
            check.failures.push_back("took " + fmt("%.2f s", elapsed) + ", budget " + fmt("%.0f s", cr.budget_s));
        }
        const bool ok = check.failures.empty();
        failed += !ok;
        std::string detail = join(ok ? check.notes : check.failures, "; ");
        std::printf("%s  %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL", cr.name.c_str(), elapsed,
                    detail.empty() ? "" : ": ", detail.c_str());
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
