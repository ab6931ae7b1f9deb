#pragma once

#include <filesystem>
#include <map>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

namespace vitalink::agent_tools {

enum class PassageSource { GeneralCorpus, UserUploaded };

std::string_view to_string(PassageSource s);

struct KnowledgePassage {
    std::string doc_id;
    std::string text;
    PassageSource source = PassageSource::GeneralCorpus;
    double score = 0.0;
};

/// Lowercased alphanumeric runs with English stopwords removed.
std::vector<std::string> tokenize(std::string_view text);

/// Lexical index. A document's score for a query is the sum, over distinct
/// query terms, of that term's count in the document. Results are ordered by
/// score descending, then doc_id ascending, and include zero-score documents,
/// so retrieve(q, k) is always a prefix of retrieve(q, k + 1).
class KnowledgeIndex {
public:
    /// Re-adding a doc_id replaces the document.
    void add(std::string doc_id, std::string text, PassageSource source);
    /// Adds every *.txt file in `dir` with its file stem as doc_id. Returns
    /// the count added. Throws MissingFile if `dir` is not a directory.
    std::size_t load_directory(const std::filesystem::path& dir, PassageSource source);

    std::size_t size() const;

    /// Throws EmptyIndex when nothing is indexed, ConfigError when k < 1.
    std::vector<KnowledgePassage> retrieve(std::string_view query, std::size_t k) const;

private:
    struct Doc {
        std::string text;
        PassageSource source;
        std::map<std::string, int> tf;
    };
    mutable std::shared_mutex mutex_;
    std::map<std::string, Doc> docs_;
};

}  // namespace vitalink::agent_tools
