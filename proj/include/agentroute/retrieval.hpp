#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "agentroute/dense_index.hpp"
#include "agentroute/lexical_index.hpp"
#include "agentroute/ranked_list.hpp"

namespace agentroute {

enum class FusionMode { rrf, weighted_sum, dense_only, lexical_only };

const char* to_string(FusionMode m);
FusionMode fusion_mode_from_string(std::string_view s);

struct RetrievalConfig {
    int top_n = 0;  // 0 = auto: max(50, 10 * top_k)
    int top_k = 5;
    FusionMode fusion = FusionMode::rrf;
    double rrf_constant = 60.0;
    double dense_weight = 0.5;  // weighted_sum only
    CorpusScope scope = CorpusScope::joint;

    int effective_top_n() const { return top_n > 0 ? top_n : std::max(50, 10 * top_k); }
    void validate() const;
};

/**
 * Combine a lexical and a dense ranking over the same corpus into one list.
 *
 * rrf: score(e) = sum over lists of 1/(c + rank(e)), rank counted from 1,
 * a list where e is missing contributing 0. Rank-based, so it is robust to
 * incomparable score scales across embedding models.
 *
 * weighted_sum: min-max normalize each list's scores to [0,1] (a list whose
 * scores are all equal normalizes to 1), then w*dense + (1-w)*lexical with
 * missing entries contributing 0.
 *
 * dense_only / lexical_only pass the corresponding list through.
 *
 * Throws ScopeMismatch when the inputs were built over different scopes.
 */
RankedList fuse(const RankedList& lexical, const RankedList& dense, const RetrievalConfig& config);

/// Top-K unique agents resolved from a ranked entity list by ownership
/// traversal, plus the evidence for each.
struct AgentSelection {
    std::vector<std::string> agents;  // agent ids, first-selected first
    // agent id -> every walked entity (prefixed key, walk order) that mapped
    // to it, including repeats encountered after the agent was selected.
    std::map<std::string, std::vector<std::string>> supporting_entities;
    bool exhausted_list = false;  // fewer than K agents because the list ran out
};

/**
 * Walk the ranked list in order and resolve each entity to a candidate
 * agent: an agent entity is its own candidate, a tool entity maps to its
 * owner, and a tool without an owner is skipped. Unseen candidates are
 * appended until K agents are selected or the list is exhausted.
 */
AgentSelection select_agents(const RankedList& ranked, const Catalog& catalog, int k);

enum class QueryMode { direct, step_wise };

struct QueryStep {
    int index = 1;  // contiguous from 1
    std::string text;
};

/// A direct query or an ordered list of step sub-queries. Steps come from
/// dataset annotations; this engine never generates decompositions.
struct QuerySpec {
    QueryMode mode = QueryMode::direct;
    std::string question_id;
    std::string direct_text;
    std::vector<QueryStep> steps;

    void validate() const;
    static QuerySpec direct(std::string question_id, std::string text);
    static QuerySpec step_wise(std::string question_id, std::vector<std::string> step_texts);
};

/**
 * Immutable query engine over one corpus scope: catalog + both indexes +
 * the embedder used for query vectors. Safe for concurrent queries.
 */
class RetrievalEngine {
  public:
    RetrievalEngine(Catalog catalog, CorpusScope scope, Bm25Params bm25,
                    EmbeddingProviderSpec provider, std::filesystem::path cache_dir,
                    RetrievalConfig config,
                    std::string_view text_template = kDefaultTextTemplate);

    /// Rebuild from previously persisted indexes (cmd_index output).
    RetrievalEngine(Catalog catalog, LexicalIndex lexical, DenseIndex dense,
                    EmbeddingProviderSpec provider, std::filesystem::path cache_dir,
                    RetrievalConfig config);

    /// Fused candidate list truncated to the configured N. A query that
    /// embeds to the zero vector contributes no dense evidence.
    RankedList top_n(const std::string& query_text) const;

    /// top_n followed by agent selection at k (defaults to config top_k).
    AgentSelection retrieve(const std::string& query_text, int k) const;

    const Catalog& catalog() const { return catalog_; }
    const RetrievalConfig& config() const { return config_; }
    const LexicalIndex& lexical() const { return lexical_; }
    const DenseIndex& dense() const { return dense_; }
    Embedder& embedder() const { return *embedder_; }
    std::size_t entity_count() const { return dense_.size(); }

  private:
    Catalog catalog_;
    LexicalIndex lexical_;
    DenseIndex dense_;
    mutable std::unique_ptr<Embedder> embedder_;  // internally synchronized
    RetrievalConfig config_;
};

/// One AgentSelection per step (direct mode: a single selection from the
/// question text). Steps are retrieved independently; no state is shared.
std::vector<AgentSelection> run_query(const QuerySpec& query, const RetrievalEngine& engine);

/// Baseline path: retrieval restricted to the agent corpus. Requires an
/// engine built with scope=agents_only; selection reduces to truncation.
AgentSelection agent_only_retrieve(const std::string& query_text, const RetrievalEngine& engine,
                                   int k);

/// External serialization of a query result:
/// {question_id, mode, steps:[{step_index, agents, supporting, exhausted}]}.
/// With include_explanation, each supporting entity carries its kind and
/// fused score drawn from the per-step ranked list.
nlohmann::json query_result_json(const QuerySpec& query,
                                 const std::vector<AgentSelection>& selections,
                                 const std::vector<RankedList>& step_lists,
                                 bool include_explanation);

}  // namespace agentroute
