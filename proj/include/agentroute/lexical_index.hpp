#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "agentroute/ranked_list.hpp"

namespace agentroute {

/// Lowercase and split on every non-alphanumeric codepoint; empty tokens
/// dropped; no stemming or stopwords. ASCII letters are lowercased; non-ASCII
/// codepoints are treated as word characters and passed through unchanged,
/// so the rule stays byte-deterministic without locale tables.
std::vector<std::string> tokenize(std::string_view text);

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

struct Posting {
    std::uint32_t ordinal;  // entity ordinal, ascending within a postings list
    std::uint32_t tf;
};

/**
 * Okapi BM25 index over an entity corpus. Immutable after build; concurrent
 * scoring calls are independent.
 *
 * Scoring uses idf(t) = ln(1 + (N - n(t) + 0.5) / (n(t) + 0.5)), which is
 * strictly positive, so fused scores never go negative for common terms.
 * Query tokens are a bag: a term occurring twice in the query contributes
 * twice.
 */
class LexicalIndex {
  public:
    LexicalIndex() = default;

    /// Build from entities in corpus order. Throws EmptyCorpus. Requires
    /// k1 > 0 and 0 <= b <= 1.
    static LexicalIndex build(const std::vector<CatalogEntity>& entities, Bm25Params params,
                              CorpusScope scope);

    /// BM25 scores for every entity matching at least one query term,
    /// score-descending with ties by ordinal. Empty query yields an empty
    /// list.
    RankedList score(std::string_view query) const;

    std::size_t doc_count() const { return doc_lengths_.size(); }
    double avg_doc_length() const { return avg_doc_length_; }
    const Bm25Params& params() const { return params_; }
    CorpusScope scope() const { return scope_; }
    const std::vector<std::uint32_t>& doc_lengths() const { return doc_lengths_; }

    // Versioned JSON sidecar; load rejects unknown format tags.
    nlohmann::json to_json() const;
    static LexicalIndex from_json(const nlohmann::json& doc);
    void save(const std::filesystem::path& path) const;
    static LexicalIndex load(const std::filesystem::path& path);

  private:
    std::map<std::string, std::vector<Posting>> postings_;
    std::vector<std::uint32_t> doc_lengths_;
    double avg_doc_length_ = 0.0;
    Bm25Params params_;
    CorpusScope scope_ = CorpusScope::joint;
    // Per-ordinal identity so scores come back as catalog entities.
    std::vector<std::string> entity_ids_;
    std::vector<EntityKind> entity_kinds_;
};

}  // namespace agentroute
