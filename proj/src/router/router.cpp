#include "vitalink/router/router.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "vitalink/error.hpp"

namespace vitalink::router {

std::string_view to_string(Tier tier) {
    switch (tier) {
        case Tier::Simple: return "simple";
        case Tier::Reasoning: return "reasoning";
        case Tier::HighRisk: return "high_risk";
    }
    return "simple";
}

std::optional<Tier> parse_tier(std::string_view text) {
    std::string t;
    for (char c : text) {
        if (std::isalpha(static_cast<unsigned char>(c))) {
            t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    if (t == "simple") return Tier::Simple;
    if (t == "reasoning") return Tier::Reasoning;
    if (t == "highrisk") return Tier::HighRisk;
    return std::nullopt;
}

PriceTable PriceTable::defaults() {
    return PriceTable{{{"gpt-4o-mini", 0.00015},
                       {"gpt-3.5-turbo", 0.001},
                       {"o3-mini", 0.00125},
                       {"o1", 0.015}}};
}

double PriceTable::price(std::string_view model) const {
    auto it = per_1k_usd.find(model);
    if (it == per_1k_usd.end()) throw UnknownModel(std::string(model));
    return it->second;
}

void PriceTable::validate() const {
    for (const auto& [model, p] : per_1k_usd) {
        if (!(p > 0.0)) throw ConfigError("price of " + model + " must be > 0");
    }
}

const std::string& TierModels::model_for(Tier tier) const {
    switch (tier) {
        case Tier::Simple: return simple;
        case Tier::Reasoning: return reasoning;
        case Tier::HighRisk: return high_risk;
    }
    return simple;
}

ClassifierRules ClassifierRules::defaults() {
    ClassifierRules r;
    r.high_risk_terms = {"chest pain", "pain",        "dizz",       "faint",     "breath",
                         "palpitation", "dropped",    "drop",       "urgent",    "emergency",
                         "collapse",   "numb",        "irregular",  "anomal",    "abnormal",
                         "alarm",      "severe",      "fever",      "spike",     "racing",
                         "unconscious", "passed out", "low oxygen", "blue lips", "ambulance"};
    r.reasoning_terms = {"summar", "trend",   "compare", "comparison", "week",    "month",
                         "average", "pattern", "why",     "explain",    "analy",   "correlat",
                         "over time", "progress", "improve", "recommend", "plan", "history"};
    return r;
}

std::size_t estimate_tokens(std::string_view text) {
    std::size_t code_points = 0;
    for (unsigned char c : text) {
        if ((c & 0xC0) != 0x80) ++code_points;
    }
    return (code_points + 3) / 4;
}

namespace {

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool contains_term(const std::string& haystack, const std::string& term) {
    const std::string t = lower(term);
    for (auto pos = haystack.find(t); pos != std::string::npos; pos = haystack.find(t, pos + 1)) {
        if (pos == 0 || !std::isalnum(static_cast<unsigned char>(haystack[pos - 1]))) return true;
    }
    return false;
}

bool any_term(const std::string& haystack, const std::vector<std::string>& terms) {
    for (const auto& t : terms) {
        if (contains_term(haystack, t)) return true;
    }
    return false;
}

}  // namespace

Tier classify(std::string_view query, const ClassifierRules& rules) {
    const std::string q = lower(query);
    if (any_term(q, rules.high_risk_terms)) return Tier::HighRisk;
    if (any_term(q, rules.reasoning_terms)) return Tier::Reasoning;
    if (estimate_tokens(query) >= rules.long_query_tokens) return Tier::Reasoning;
    return Tier::Simple;
}

std::string classification_prompt(std::string_view query) {
    std::string p =
        "### Query Classification\n"
        "Classify the user query below by complexity. Answer with exactly one word: "
        "simple (greetings, basic data requests), reasoning (summaries, trends, multi-step "
        "questions) or high_risk (possible urgent health anomalies).\n"
        "Query: ";
    p += query;
    p += '\n';
    return p;
}

Tier ModelClassifier::classify(std::string_view query) {
    try {
        const auto reply = client_.complete(classification_prompt(query), params_);
        if (auto tier = parse_tier(reply)) return *tier;
    } catch (const Error&) {
    }
    return router::classify(query, fallback_);
}

CostRecord cost(std::string_view query, Tier route, const PriceTable& table,
                bool include_router_overhead, const RouterConfig& config, std::string query_id) {
    CostRecord rec;
    rec.query_id = std::move(query_id);
    rec.route = route;
    const std::size_t tokens = estimate_tokens(query);
    rec.tokens_per_model[config.tiers.model_for(route)] += tokens;
    if (include_router_overhead) rec.tokens_per_model[config.router_model] += tokens;
    for (const auto& [model, n] : rec.tokens_per_model) {
        rec.total_usd += static_cast<double>(n) / 1000.0 * table.price(model);
    }
    return rec;
}

CostRecord baseline_cost(std::string_view query, const PriceTable& table,
                         const RouterConfig& config, std::string query_id) {
    CostRecord rec;
    rec.query_id = std::move(query_id);
    rec.route = Tier::HighRisk;
    const std::size_t tokens = estimate_tokens(query);
    rec.tokens_per_model[config.baseline_model] = tokens;
    rec.total_usd = static_cast<double>(tokens) / 1000.0 * table.price(config.baseline_model);
    return rec;
}

double CostStudy::relative_reduction() const {
    return total_baseline > 0.0 ? 1.0 - total_tiered / total_baseline : 0.0;
}

double CostStudy::relative_reduction_with_overhead() const {
    return total_baseline > 0.0 ? 1.0 - total_tiered_with_overhead / total_baseline : 0.0;
}

std::string CostStudy::to_json() const {
    nlohmann::ordered_json j;
    j["queries"] = queries.size();
    j["total_tiered_usd"] = total_tiered;
    j["total_tiered_with_overhead_usd"] = total_tiered_with_overhead;
    j["total_baseline_usd"] = total_baseline;
    j["savings_usd"] = savings();
    j["relative_reduction"] = relative_reduction();
    j["relative_reduction_with_overhead"] = relative_reduction_with_overhead();
    nlohmann::ordered_json tiers = nlohmann::ordered_json::object();
    for (auto t : {Tier::Simple, Tier::Reasoning, Tier::HighRisk}) {
        std::size_t n = 0;
        for (const auto& q : queries) n += q.route == t;
        tiers[std::string(to_string(t))] = n;
    }
    j["routes"] = tiers;
    j["reference"] = {{"total_tiered_usd", 0.0024481},
                      {"total_baseline_usd", 0.0056363},
                      {"relative_reduction", 0.5657}};
    return j.dump(2);
}

std::string CostStudy::to_csv() const {
    std::string out = "query_id,route,tokens,tiered_usd,tiered_with_overhead_usd,baseline_usd\n";
    char line[256];
    for (const auto& q : queries) {
        std::snprintf(line, sizeof line, "%s,%s,%zu,%.10g,%.10g,%.10g\n", q.query_id.c_str(),
                      std::string(to_string(q.route)).c_str(), q.tokens, q.tiered_usd,
                      q.tiered_with_overhead_usd, q.baseline_usd);
        out += line;
    }
    return out;
}

CostStudy cost_study(const std::vector<std::string>& queries, const PriceTable& table,
                     Classifier& classifier, const RouterConfig& config) {
    if (queries.empty()) throw EmptyInput("cost study needs at least one query");
    CostStudy study;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        char id[16];
        std::snprintf(id, sizeof id, "q%03zu", i + 1);
        QueryCost qc;
        qc.query_id = id;
        qc.route = classifier.classify(queries[i]);
        qc.tokens = estimate_tokens(queries[i]);
        qc.tiered_usd = cost(queries[i], qc.route, table, false, config).total_usd;
        qc.tiered_with_overhead_usd = cost(queries[i], qc.route, table, true, config).total_usd;
        qc.baseline_usd = baseline_cost(queries[i], table, config).total_usd;
        study.total_tiered += qc.tiered_usd;
        study.total_tiered_with_overhead += qc.tiered_with_overhead_usd;
        study.total_baseline += qc.baseline_usd;
        study.queries.push_back(std::move(qc));
    }
    return study;
}

std::vector<std::string> load_queries(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile(path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        out.push_back(line.substr(first));
    }
    return out;
}

}  // namespace vitalink::router
