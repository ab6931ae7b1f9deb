#include <doctest.h>

#include <ctime>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>

#include "support/oracles.hpp"
#include "vitalink/agent_tools/chart.hpp"
#include "vitalink/agent_tools/cron.hpp"
#include "vitalink/agent_tools/media_store.hpp"
#include "vitalink/agent_tools/retrieval.hpp"
#include "vitalink/agent_tools/scheduler.hpp"
#include "vitalink/agent_tools/tools.hpp"
#include "vitalink/error.hpp"

using namespace vitalink;
using namespace vitalink::agent_tools;
using orchestrator::JsonlStore;
using orchestrator::UserProfile;

namespace {

constexpr std::int64_t kDay = 86400;
constexpr std::int64_t kT0 = 1'767'225'600;  // 2026-01-01T00:00:00Z, a Thursday

// Field matcher written against struct tm, independent of the chrono path.
bool field_ok(const std::string& field, int v) {
    std::stringstream ss(field);
    std::string part;
    while (std::getline(ss, part, ',')) {
        int step = 1;
        if (auto s = part.find('/'); s != std::string::npos) {
            step = std::stoi(part.substr(s + 1));
            part = part.substr(0, s);
        }
        int lo, hi;
        if (part == "*") {
            lo = -1000, hi = 1000;
        } else if (auto d = part.find('-'); d != std::string::npos) {
            lo = std::stoi(part.substr(0, d)), hi = std::stoi(part.substr(d + 1));
        } else {
            lo = hi = std::stoi(part);
        }
        if (part == "*") {
            if (v % step == 0 || step == 1) return true;
            continue;
        }
        if (v >= lo && v <= hi && (v - lo) % step == 0) return true;
    }
    return false;
}

bool oracle_matches(const std::string& expr, std::int64_t t) {
    std::stringstream ss(expr);
    std::string f[5];
    for (auto& x : f) ss >> x;
    const std::time_t tt = static_cast<std::time_t>(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    if (tm.tm_sec != 0) return false;
    const bool dom_star = f[2][0] == '*', dow_star = f[4][0] == '*';
    const bool dom = field_ok(f[2], tm.tm_mday);
    const bool dow = field_ok(f[4], tm.tm_wday) || (tm.tm_wday == 0 && field_ok(f[4], 7));
    const bool day = (!dom_star && !dow_star) ? (dom || dow) : (dom && dow);
    return field_ok(f[0], tm.tm_min) && field_ok(f[1], tm.tm_hour) &&
           field_ok(f[3], tm.tm_mon + 1) && day;
}

UserProfile user(const std::string& phone, std::optional<std::string> name = {}) {
    UserProfile u;
    u.phone = phone;
    u.name = std::move(name);
    return u;
}

interpreter::VitalEstimate estimate(std::uint32_t ts, std::optional<double> hr) {
    interpreter::VitalEstimate e;
    e.burst_ts = ts;
    e.hr = hr;
    return e;
}

}  // namespace

TEST_SUITE("agent_tools.cron") {
    TEST_CASE("malformed expressions are rejected") {
        for (const char* bad : {"9am daily", "", "* * * *", "* * * * * *", "60 * * * *",
                                "* 24 * * *", "* * 0 * *", "* * * 13 *", "* * * * 8",
                                "*/0 * * * *", "5-1 * * * *", "0 0 31 2 *", "a b c d e"}) {
            CAPTURE(bad);
            CHECK_THROWS_AS(CronExpr::parse(bad), InvalidCron);
        }
    }

    TEST_CASE("next fire of a daily expression") {
        const auto c = CronExpr::parse("0 9 * * *");
        CHECK(c.next_after(kT0) == kT0 + 9 * 3600);
        CHECK(c.next_after(kT0 + 9 * 3600) == kT0 + kDay + 9 * 3600);
        CHECK(c.next_after(kT0 + 9 * 3600 - 1) == kT0 + 9 * 3600);
    }

    TEST_CASE("day-of-month and day-of-week combine with OR when both are set") {
        const auto c = CronExpr::parse("0 0 1 * 1");
        std::vector<std::int64_t> fires;
        for (std::int64_t t = kT0 - 1; fires.size() < 6;) fires.push_back(t = c.next_after(t));
        // 2026-01-01 (Thu, the 1st), then Mondays 5, 12, 19, 26 Jan, then 1 Feb.
        const std::vector<std::int64_t> expected = {kT0,           kT0 + 4 * kDay,  kT0 + 11 * kDay,
                                                    kT0 + 18 * kDay, kT0 + 25 * kDay, kT0 + 31 * kDay};
        CHECK(fires == expected);
        CHECK(CronExpr::parse("0 0 * * 7").next_after(kT0) == kT0 + 3 * kDay);  // Sunday
    }

    TEST_CASE("next_after agrees with a brute-force minute scan") {
        const std::vector<std::string> exprs = {"*/5 * * * *", "0 9 * * *",     "30 8-17/3 * * 1-5",
                                                "15,45 */6 1,15 * *", "0 0 1 * 1", "0 12 29 2 *",
                                                "7 3 * 6-8 0"};
        std::mt19937_64 rng(1);
        std::uniform_int_distribution<std::int64_t> start(kT0, kT0 + 400 * kDay);
        for (const auto& e : exprs) {
            const auto c = CronExpr::parse(e);
            for (int i = 0; i < 20; ++i) {
                const std::int64_t t = start(rng);
                std::int64_t brute = (t / 60 + 1) * 60;
                while (!oracle_matches(e, brute)) brute += 60;
                CAPTURE(e);
                CAPTURE(t);
                REQUIRE(c.next_after(t) == brute);
            }
        }
    }
}

TEST_SUITE("agent_tools.scheduler") {
    TEST_CASE("daily expression over three simulated days fires three times at 09:00") {
        JsonlStore store;
        ManualClock clock(kT0);
        std::vector<std::int64_t> fires;
        Scheduler s(store, clock, [&](const ScheduledTask&, std::int64_t t) { fires.push_back(t); });
        s.schedule({.user = "+15550000001", .kind = TaskKind::DailySummary, .cron_expr = "0 9 * * *"});
        for (std::int64_t t = kT0; t <= kT0 + 3 * kDay; t += 60) {
            clock.set(t);
            s.tick();
        }
        REQUIRE(fires.size() == 3);
        for (auto f : fires) CHECK(f % kDay == 9 * 3600);
    }

    TEST_CASE("five-minute expression over one hour fires twelve times") {
        JsonlStore store;
        ManualClock clock(kT0 + 10 * 3600);
        std::size_t n = 0;
        Scheduler s(store, clock, [&](const ScheduledTask&, std::int64_t) { ++n; });
        s.schedule({.cron_expr = "*/5 * * * *"});
        for (int m = 1; m <= 60; ++m) {
            clock.advance(60);
            s.tick();
        }
        CHECK(n == 12);
    }

    TEST_CASE("missed instants fire once each when the clock jumps") {
        JsonlStore store;
        ManualClock clock(kT0);
        std::vector<std::int64_t> fires;
        Scheduler s(store, clock, [&](const ScheduledTask&, std::int64_t t) { fires.push_back(t); });
        s.schedule({.cron_expr = "0 9 * * *"});
        clock.set(kT0 + 5 * kDay);
        CHECK(s.tick() == 5);
        CHECK(s.tick() == 0);
        CHECK(std::set<std::int64_t>(fires.begin(), fires.end()).size() == 5);
    }

    TEST_CASE("exactly one fire per day over 30 days across a restart") {
        oracle::TempDir dir;
        ManualClock clock(kT0);
        std::vector<std::int64_t> fires;
        auto handler = [&](const ScheduledTask&, std::int64_t t) { fires.push_back(t); };
        {
            JsonlStore store(dir.path());
            Scheduler s(store, clock, handler);
            s.schedule({.user = "+15550000001", .cron_expr = "0 9 * * *"});
            for (; clock.now() < kT0 + 15 * kDay + 3600; clock.advance(600)) s.tick();
        }
        {
            JsonlStore store(dir.path());  // reopened from disk
            REQUIRE(store.tasks().size() == 1);
            Scheduler s(store, clock, handler);
            for (; clock.now() <= kT0 + 30 * kDay; clock.advance(600)) s.tick();
            CHECK(store.tasks()[0].last_fire_ts == kT0 + 29 * kDay + 9 * 3600);
        }
        REQUIRE(fires.size() == 30);
        for (std::size_t d = 0; d < fires.size(); ++d) {
            CHECK(fires[d] == kT0 + static_cast<std::int64_t>(d) * kDay + 9 * 3600);
        }
    }

    TEST_CASE("cancelled tasks stop firing") {
        JsonlStore store;
        ManualClock clock(kT0);
        std::size_t n = 0;
        Scheduler s(store, clock, [&](const ScheduledTask&, std::int64_t) { ++n; });
        const auto id = s.schedule({.cron_expr = "* * * * *"});
        CHECK(id.size() == 32);
        clock.advance(120);
        CHECK(s.tick() == 2);
        CHECK(s.cancel(id));
        CHECK_FALSE(s.cancel(id));
        clock.advance(600);
        CHECK(s.tick() == 0);
        CHECK_THROWS_AS(s.schedule({.cron_expr = "9am daily"}), InvalidCron);
    }

    TEST_CASE("background loop ticks") {
        JsonlStore store;
        ManualClock clock(kT0);
        std::atomic<int> n{0};
        Scheduler s(store, clock, [&](const ScheduledTask&, std::int64_t) { ++n; });
        s.schedule({.cron_expr = "* * * * *"});
        clock.advance(60);
        s.start(std::chrono::milliseconds(5));
        for (int i = 0; i < 400 && n == 0; ++i) std::this_thread::sleep_for(std::chrono::milliseconds(5));
        s.stop();
        CHECK(n == 1);
    }
}

TEST_SUITE("agent_tools.data") {
    TEST_CASE("latest_vitals picks the largest timestamp, ties by insertion") {
        JsonlStore store;
        store.put_user(user("+15550000001"));
        CHECK_FALSE(latest_vitals(store, "+15550000001"));
        for (std::uint32_t t : {1u, 3u, 2u}) store.append_vital("+15550000001", estimate(t, 60.0 + t), false, false);
        CHECK(latest_vitals(store, "+15550000001")->burst_ts == 3);
        store.append_vital("+15550000001", estimate(3, 99.0), false, false);
        CHECK(latest_vitals(store, "+15550000001")->hr == 99.0);
    }

    TEST_CASE("no-data reminder boundary") {
        JsonlStore store;
        const std::string p = "+15550000002";
        CHECK_THROWS_AS(fire_no_data_check(store, p, kT0), UnknownUser);
        store.put_user(user(p, "Ana"));
        const auto none = fire_no_data_check(store, p, kT0);
        REQUIRE(none);
        CHECK(none->body.find("Ana") != std::string::npos);
        CHECK(none->direction == gateway::Direction::Outbound);
        store.append_vital(p, estimate(static_cast<std::uint32_t>(kT0), 70.0), false, false);
        CHECK_FALSE(fire_no_data_check(store, p, kT0 + 600));
        CHECK_FALSE(fire_no_data_check(store, p, kT0 + 6 * 3600));
        CHECK(fire_no_data_check(store, p, kT0 + 6 * 3600 + 1));
    }
}

TEST_SUITE("agent_tools.chart") {
    std::vector<std::pair<double, double>> polyline(const std::string& svg) {
        std::smatch m;
        REQUIRE(std::regex_search(svg, m, std::regex("<polyline points=\"([^\"]*)\"")));
        std::vector<std::pair<double, double>> out;
        std::stringstream ss(m[1].str());
        std::string pair;
        while (ss >> pair) {
            const auto comma = pair.find(',');
            out.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
        }
        return out;
    }

    TEST_CASE("two-point line chart vertices sit at the scaled coordinates") {
        const ChartRequest req{"+1", ChartMetric::Hr, 1000, 2000, ChartKind::Line};
        const std::vector<ChartPoint> pts = {{1250, 60.0}, {1750, 80.0}};
        const auto svg = render_svg(req, pts);
        const auto v = polyline(svg);
        REQUIRE(v.size() == 2);
        for (std::size_t i = 0; i < 2; ++i) {
            const double x = 60.0 + (pts[i].ts - 1000) / 1000.0 * 560.0;
            const double y = 310.0 - (pts[i].value - 60.0) / 20.0 * 280.0;
            CHECK(v[i].first == doctest::Approx(x).epsilon(1e-9));
            CHECK(v[i].second == doctest::Approx(y).epsilon(1e-9));
        }
        CHECK(svg.find("width=\"640\" height=\"360\"") != std::string::npos);
        CHECK(svg.find("Heart rate (BPM)") != std::string::npos);
        CHECK(svg.find("Time (UTC)") != std::string::npos);
        CHECK(svg.find("1970-01-01T00:20:50Z") != std::string::npos);  // point timestamp
    }

    TEST_CASE("flat series is centred") {
        const auto v = polyline(render_svg({"+1", ChartMetric::Spo2, 0, 10, ChartKind::Line}, {{5, 97.0}}));
        REQUIRE(v.size() == 1);
        CHECK(v[0].first == doctest::Approx(340.0));
        CHECK(v[0].second == doctest::Approx(170.0));
    }

    TEST_CASE("empty range or no data") {
        CHECK_THROWS_AS(render_svg({"+1", ChartMetric::Hr, 10, 10, ChartKind::Line}, {{10, 1.0}}), NoData);
        CHECK_THROWS_AS(render_svg({"+1", ChartMetric::Hr, 0, 10, ChartKind::Line}, {}), NoData);
        JsonlStore store;
        MediaStore media;
        CHECK_THROWS_AS(render_chart(store, media, {"+1", ChartMetric::Hr, 0, 10, ChartKind::Line}), NoData);
    }

    TEST_CASE("rendering is deterministic and stored bytes match") {
        JsonlStore store;
        const std::string p = "+15550000003";
        for (std::uint32_t t = 100; t < 200; t += 10) store.append_vital(p, estimate(t, 60.0 + t % 7), false, false);
        store.append_vital(p, estimate(150, std::nullopt), false, false);
        MediaStore media;
        const ChartRequest req{p, ChartMetric::Hr, 0, 300, ChartKind::Line};
        const auto a = render_chart(store, media, req);
        const auto b = render_chart(store, media, req);
        CHECK(a != b);
        CHECK(media.get(a)->bytes == media.get(b)->bytes);
        CHECK(media.get(a)->bytes == render_svg(req, chart_points(store, req)));
        CHECK(media.get(a)->content_type == "image/svg+xml");
        CHECK(chart_points(store, req).size() == 10);
    }

    TEST_CASE("histogram has one bar per bin") {
        std::vector<ChartPoint> pts;
        for (int i = 0; i < 50; ++i) pts.push_back({i, 60.0 + i % 13});
        const auto svg = render_svg({"+1", ChartMetric::Hr, 0, 100, ChartKind::Histogram}, pts);
        std::size_t bars = 0;
        for (auto pos = svg.find("class=\"bar\""); pos != std::string::npos; pos = svg.find("class=\"bar\"", pos + 1)) ++bars;
        CHECK(bars == kHistogramBins);
    }
}

TEST_SUITE("agent_tools.media") {
    TEST_CASE("ids are opaque and unknown ids resolve to nothing") {
        MediaStore m;
        std::set<std::string> ids;
        for (int i = 0; i < 100; ++i) ids.insert(m.put("x", "text/plain"));
        CHECK(ids.size() == 100);
        for (const auto& id : ids) CHECK(MediaStore::valid_id(id));
        CHECK_FALSE(m.get("0123456789abcdef0123456789abcdef"));
        CHECK_FALSE(m.get("../../etc/passwd"));
    }

    TEST_CASE("disk-backed media survives a new store instance") {
        oracle::TempDir dir;
        std::string id;
        const std::string bytes("\x00\x01\xffpng", 6);
        { id = MediaStore(dir.path()).put(bytes, "image/png"); }
        const auto got = MediaStore(dir.path()).get(id);
        REQUIRE(got);
        CHECK(got->bytes == bytes);
        CHECK(got->content_type == "image/png");
    }
}

TEST_SUITE("agent_tools.retrieval") {
    TEST_CASE("empty index and bad k") {
        KnowledgeIndex idx;
        CHECK_THROWS_AS(idx.retrieve("x", 1), EmptyIndex);
        idx.add("a", "text", PassageSource::GeneralCorpus);
        CHECK_THROWS_AS(idx.retrieve("x", 0), ConfigError);
    }

    TEST_CASE("a query matching exactly one document ranks it first") {
        KnowledgeIndex idx;
        idx.add("a", "apples and pears", PassageSource::GeneralCorpus);
        idx.add("b", "running shoes", PassageSource::GeneralCorpus);
        idx.add("c", "sleep hygiene", PassageSource::UserUploaded);
        const auto r = idx.retrieve("which shoes for running", 3);
        CHECK(r[0].doc_id == "b");
        CHECK(r[0].score == 2.0);
        CHECK(idx.retrieve("sleep", 1)[0].source == PassageSource::UserUploaded);
    }

    TEST_CASE("k beyond the corpus returns every document ranked") {
        KnowledgeIndex idx;
        idx.add("z", "heart heart", PassageSource::GeneralCorpus);
        idx.add("y", "heart", PassageSource::GeneralCorpus);
        idx.add("x", "lungs", PassageSource::GeneralCorpus);
        const auto r = idx.retrieve("heart", 10);
        REQUIRE(r.size() == 3);
        CHECK(r[0].doc_id == "z");
        CHECK(r[1].doc_id == "y");
        CHECK(r[2].doc_id == "x");
        CHECK(r[2].score == 0.0);
    }

    TEST_CASE("ranking matches a brute-force scorer with doc_id tie-break") {
        const std::vector<std::string> vocab = {"heart", "rate", "oxygen", "sleep", "walk", "run", "water", "stress"};
        std::mt19937_64 rng(9);
        std::uniform_int_distribution<std::size_t> w(0, vocab.size() - 1), len(0, 12), nq(1, 4);
        for (int round = 0; round < 50; ++round) {
            KnowledgeIndex idx;
            std::map<std::string, std::vector<std::string>> docs;
            for (int d = 0; d < 15; ++d) {
                char id[8];
                std::snprintf(id, sizeof id, "d%02d", d);
                std::string text;
                for (std::size_t i = 0, n = len(rng); i < n; ++i) {
                    docs[id].push_back(vocab[w(rng)]);
                    text += docs[id].back() + " ";
                }
                idx.add(id, text, PassageSource::GeneralCorpus);
            }
            std::set<std::string> q;
            std::string query;
            for (std::size_t i = 0, n = nq(rng); i < n; ++i) {
                q.insert(vocab[w(rng)]);
                query += *std::prev(q.end()) + " ";
            }
            q.clear();
            for (const auto& t : tokenize(query)) q.insert(t);
            std::vector<std::pair<double, std::string>> expected;
            for (int d = 0; d < 15; ++d) {
                char id[8];
                std::snprintf(id, sizeof id, "d%02d", d);
                double s = 0;
                for (const auto& word : docs[id]) s += q.count(word);
                expected.emplace_back(-s, id);
            }
            std::sort(expected.begin(), expected.end());
            const auto got = idx.retrieve(query, 15);
            REQUIRE(got.size() == 15);
            for (std::size_t i = 0; i < 15; ++i) {
                CHECK(got[i].doc_id == expected[i].second);
                CHECK(got[i].score == -expected[i].first);
            }
            for (std::size_t k = 1; k < 15; ++k) {
                const auto a = idx.retrieve(query, k), b = idx.retrieve(query, k + 1);
                for (std::size_t i = 0; i < k; ++i) REQUIRE(a[i].doc_id == b[i].doc_id);
            }
        }
    }

    TEST_CASE("bundled corpus") {
        KnowledgeIndex idx;
        CHECK(idx.load_directory(std::string(VITALINK_DATA_DIR) + "/corpus", PassageSource::GeneralCorpus) == 8);
        CHECK(idx.retrieve("low oxygen saturation reading", 1)[0].doc_id == "blood_oxygen");
        CHECK(idx.retrieve("trouble falling asleep at night", 1)[0].doc_id == "sleep_hygiene");
        CHECK_THROWS_AS(idx.load_directory("/nonexistent", PassageSource::GeneralCorpus), MissingFile);
    }

    TEST_CASE("tokenizer drops stopwords and case") {
        CHECK(tokenize("What is MY Heart-Rate?") == std::vector<std::string>{"heart", "rate"});
    }
}
