#include "vitalink/agent_tools/retrieval.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>

#include "vitalink/error.hpp"

namespace vitalink::agent_tools {

namespace fs = std::filesystem;

std::string_view to_string(PassageSource s) {
    return s == PassageSource::GeneralCorpus ? "general_corpus" : "user_uploaded";
}

namespace {

const std::set<std::string, std::less<>>& stopwords() {
    static const std::set<std::string, std::less<>> words = {
        "a",    "about", "an",   "and",  "are",   "as",    "at",   "be",    "but",  "by",
        "can",  "do",    "does", "for",  "from",  "how",   "i",    "if",    "in",   "into",
        "is",   "it",    "its",  "me",   "my",    "no",    "not",  "of",    "on",   "or",
        "our",  "so",    "that", "the",  "their", "them",  "then", "there", "these", "they",
        "this", "to",    "was",  "we",   "what",  "when",  "which", "who",  "why",  "will",
        "with", "you",   "your", "should", "would", "could", "has",  "have",  "had",  "were"};
    return words;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty() && !stopwords().contains(cur)) out.push_back(cur);
        cur.clear();
    };
    for (char c : text) {
        const auto u = static_cast<unsigned char>(c);
        if (std::isalnum(u)) {
            cur += static_cast<char>(std::tolower(u));
        } else {
            flush();
        }
    }
    flush();
    return out;
}

void KnowledgeIndex::add(std::string doc_id, std::string text, PassageSource source) {
    Doc d{std::move(text), source, {}};
    for (auto& t : tokenize(d.text)) d.tf[std::move(t)]++;
    std::unique_lock lock(mutex_);
    docs_[std::move(doc_id)] = std::move(d);
}

std::size_t KnowledgeIndex::load_directory(const fs::path& dir, PassageSource source) {
    if (!fs::is_directory(dir)) throw MissingFile(dir.string());
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        std::ifstream in(f);
        std::ostringstream text;
        text << in.rdbuf();
        add(f.stem().string(), text.str(), source);
    }
    return files.size();
}

std::size_t KnowledgeIndex::size() const {
    std::shared_lock lock(mutex_);
    return docs_.size();
}

std::vector<KnowledgePassage> KnowledgeIndex::retrieve(std::string_view query, std::size_t k) const {
    if (k < 1) throw ConfigError("k must be >= 1");
    std::shared_lock lock(mutex_);
    if (docs_.empty()) throw EmptyIndex("no documents indexed");
    const auto terms_vec = tokenize(query);
    const std::set<std::string> terms(terms_vec.begin(), terms_vec.end());
    std::vector<KnowledgePassage> out;
    out.reserve(docs_.size());
    for (const auto& [id, doc] : docs_) {
        double score = 0.0;
        for (const auto& t : terms) {
            if (auto it = doc.tf.find(t); it != doc.tf.end()) score += it->second;
        }
        out.push_back({id, doc.text, doc.source, score});
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
    if (out.size() > k) out.resize(k);
    return out;
}

}  // namespace vitalink::agent_tools
