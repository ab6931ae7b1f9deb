#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vitalink/interpreter/model_client.hpp"

namespace vitalink::router {

enum class Tier { Simple, Reasoning, HighRisk };

std::string_view to_string(Tier tier);
std::optional<Tier> parse_tier(std::string_view text);

/// USD per 1K input tokens, keyed by model identifier.
struct PriceTable {
    std::map<std::string, double, std::less<>> per_1k_usd;

    /// gpt-4o-mini, gpt-3.5-turbo, o3-mini and o1 at their published list prices.
    static PriceTable defaults();

    /// Throws UnknownModel.
    double price(std::string_view model) const;
    /// Throws ConfigError unless every price is > 0.
    void validate() const;
};

struct TierModels {
    std::string simple = "gpt-4o-mini";
    std::string reasoning = "o3-mini";
    std::string high_risk = "o1";

    const std::string& model_for(Tier tier) const;
};

/// Keyword rules of the heuristic classifier. Terms match at word starts,
/// case-insensitively, so "trend" also matches "trends".
struct ClassifierRules {
    std::vector<std::string> high_risk_terms;
    std::vector<std::string> reasoning_terms;
    std::size_t long_query_tokens = 40;  // keyword-free queries this long are Reasoning

    static ClassifierRules defaults();
};

struct RouterConfig {
    TierModels tiers;
    std::string router_model = "gpt-4o-mini";  // prices the classification pass
    std::string baseline_model = "o1";
    ClassifierRules rules = ClassifierRules::defaults();
};

/// ceil(code points / 4).
std::size_t estimate_tokens(std::string_view text);

/// HighRisk vocabulary wins over Reasoning vocabulary; otherwise long queries
/// are Reasoning and everything else Simple.
Tier classify(std::string_view query, const ClassifierRules& rules = ClassifierRules::defaults());

class Classifier {
public:
    virtual ~Classifier() = default;
    virtual Tier classify(std::string_view query) = 0;
};

class HeuristicClassifier final : public Classifier {
public:
    explicit HeuristicClassifier(ClassifierRules rules = ClassifierRules::defaults())
        : rules_(std::move(rules)) {}
    Tier classify(std::string_view query) override { return router::classify(query, rules_); }

private:
    ClassifierRules rules_;
};

/// Asks a model for the tier name; any failure or unrecognised answer falls
/// back to the heuristic.
class ModelClassifier final : public Classifier {
public:
    ModelClassifier(interpreter::ModelClient& client, interpreter::ModelParams params,
                    ClassifierRules fallback = ClassifierRules::defaults())
        : client_(client), params_(std::move(params)), fallback_(std::move(fallback)) {}
    Tier classify(std::string_view query) override;

private:
    interpreter::ModelClient& client_;
    interpreter::ModelParams params_;
    ClassifierRules fallback_;
};

/// Prompt for the model-backed classifier.
std::string classification_prompt(std::string_view query);

struct CostRecord {
    std::string query_id;
    std::map<std::string, std::size_t> tokens_per_model;
    double total_usd = 0.0;
    Tier route = Tier::Simple;
};

/// Input-token cost of answering `query` on `route`, optionally adding the
/// router's own pass over the same text. Throws UnknownModel.
CostRecord cost(std::string_view query, Tier route, const PriceTable& table,
                bool include_router_overhead, const RouterConfig& config = {},
                std::string query_id = {});

/// Everything sent to the baseline model, no routing pass.
CostRecord baseline_cost(std::string_view query, const PriceTable& table,
                         const RouterConfig& config = {}, std::string query_id = {});

struct QueryCost {
    std::string query_id;
    Tier route = Tier::Simple;
    std::size_t tokens = 0;
    double tiered_usd = 0.0;
    double tiered_with_overhead_usd = 0.0;
    double baseline_usd = 0.0;
};

struct CostStudy {
    std::vector<QueryCost> queries;
    double total_tiered = 0.0;
    double total_tiered_with_overhead = 0.0;
    double total_baseline = 0.0;

    double savings() const { return total_baseline - total_tiered; }
    double relative_reduction() const;
    double relative_reduction_with_overhead() const;

    std::string to_json() const;
    /// query_id,route,tokens,tiered_usd,tiered_with_overhead_usd,baseline_usd
    std::string to_csv() const;
};

/// Throws EmptyInput on an empty query list.
CostStudy cost_study(const std::vector<std::string>& queries, const PriceTable& table,
                     Classifier& classifier, const RouterConfig& config = {});

/// Non-empty, non-comment lines of a query file.
std::vector<std::string> load_queries(const std::string& path);

}  // namespace vitalink::router
