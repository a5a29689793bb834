#include "agentroute/retrieval.hpp"

#include <algorithm>
#include <unordered_map>
#include <unordered_set>

namespace agentroute {

const char* to_string(FusionMode m) {
    switch (m) {
        case FusionMode::rrf: return "rrf";
        case FusionMode::weighted_sum: return "weighted_sum";
        case FusionMode::dense_only: return "dense_only";
        case FusionMode::lexical_only: return "lexical_only";
    }
    return "unknown";
}

FusionMode fusion_mode_from_string(std::string_view s) {
    if (s == "rrf") return FusionMode::rrf;
    if (s == "weighted_sum") return FusionMode::weighted_sum;
    if (s == "dense_only") return FusionMode::dense_only;
    if (s == "lexical_only") return FusionMode::lexical_only;
    throw ConfigError("unknown fusion mode: \"" + std::string(s) + "\"");
}

void RetrievalConfig::validate() const {
    if (top_k < 1) throw ConfigError("top_k must be >= 1");
    if (effective_top_n() < top_k) throw ConfigError("top_n must be >= top_k");
    if (!(rrf_constant > 0.0)) throw ConfigError("rrf_constant must be > 0");
    if (dense_weight < 0.0 || dense_weight > 1.0) throw ConfigError("dense_weight must be in [0, 1]");
}

namespace {

RankedList passthrough(const RankedList& src, bool is_dense) {
    RankedList out;
    out.scope = src.scope;
    out.items = src.items;
    for (std::size_t i = 0; i < out.items.size(); ++i) {
        SourceRanks ranks;
        (is_dense ? ranks.dense : ranks.lexical) = static_cast<int>(i + 1);
        out.items[i].source_ranks = ranks;
    }
    return out;
}

struct FusionSlot {
    const ScoredEntity* entity = nullptr;
    std::optional<int> lexical_rank;
    std::optional<int> dense_rank;
    double lexical_score = 0.0;
    double dense_score = 0.0;
};

// Min-max normalization to [0,1]; a degenerate list (all scores equal)
// normalizes to 1 so its single rank level still counts as full evidence.
double min_max(double score, double min, double max) {
    if (max == min) return 1.0;
    return (score - min) / (max - min);
}

}  // namespace

RankedList fuse(const RankedList& lexical, const RankedList& dense, const RetrievalConfig& config) {
    if (lexical.scope != dense.scope) {
        throw ScopeMismatch(std::string("cannot fuse rankings over different scopes: ") +
                            to_string(lexical.scope) + " vs " + to_string(dense.scope));
    }
    switch (config.fusion) {
        case FusionMode::dense_only:
            return passthrough(dense, /*is_dense=*/true);
        case FusionMode::lexical_only:
            return passthrough(lexical, /*is_dense=*/false);
        default:
            break;
    }

    std::unordered_map<std::string, FusionSlot> slots;
    slots.reserve(lexical.size() + dense.size());
    for (std::size_t i = 0; i < lexical.items.size(); ++i) {
        auto& slot = slots[lexical.items[i].entity_id];
        slot.entity = &lexical.items[i];
        slot.lexical_rank = static_cast<int>(i + 1);
        slot.lexical_score = lexical.items[i].score;
    }
    for (std::size_t i = 0; i < dense.items.size(); ++i) {
        auto& slot = slots[dense.items[i].entity_id];
        slot.entity = &dense.items[i];
        slot.dense_rank = static_cast<int>(i + 1);
        slot.dense_score = dense.items[i].score;
    }

    double lex_min = 0.0, lex_max = 0.0, den_min = 0.0, den_max = 0.0;
    if (config.fusion == FusionMode::weighted_sum) {
        if (!lexical.items.empty()) {
            lex_max = lexical.items.front().score;
            lex_min = lexical.items.back().score;
        }
        if (!dense.items.empty()) {
            den_max = dense.items.front().score;
            den_min = dense.items.back().score;
        }
    }

    RankedList out;
    out.scope = lexical.scope;
    out.items.reserve(slots.size());
    for (auto& [id, slot] : slots) {
        double score = 0.0;
        if (config.fusion == FusionMode::rrf) {
            if (slot.lexical_rank) score += 1.0 / (config.rrf_constant + *slot.lexical_rank);
            if (slot.dense_rank) score += 1.0 / (config.rrf_constant + *slot.dense_rank);
        } else {  // weighted_sum
            double lex = slot.lexical_rank ? min_max(slot.lexical_score, lex_min, lex_max) : 0.0;
            double den = slot.dense_rank ? min_max(slot.dense_score, den_min, den_max) : 0.0;
            score = config.dense_weight * den + (1.0 - config.dense_weight) * lex;
        }
        ScoredEntity fused = *slot.entity;
        fused.score = score;
        fused.source_ranks = SourceRanks{slot.lexical_rank, slot.dense_rank};
        out.items.push_back(std::move(fused));
    }
    sort_ranked(out.items);
    return out;
}

AgentSelection select_agents(const RankedList& ranked, const Catalog& catalog, int k) {
    if (k < 1) throw ConfigError("select_agents requires k >= 1");

    AgentSelection sel;
    std::unordered_set<std::string> seen;
    for (const auto& item : ranked.items) {
        if (static_cast<int>(sel.agents.size()) >= k) break;

        CatalogEntity probe;
        probe.kind = item.kind;
        probe.record_id = item.kind == EntityKind::agent
                              ? item.entity_id.substr(std::string_view("agent/").size())
                              : item.entity_id.substr(std::string_view("tool/").size());
        auto candidate = owner_of(catalog, probe);
        if (!candidate) continue;  // ownerless tool: skip

        if (seen.insert(*candidate).second) {
            sel.agents.push_back(*candidate);
        }
        sel.supporting_entities[*candidate].push_back(item.entity_id);
    }
    sel.exhausted_list = static_cast<int>(sel.agents.size()) < k;
    return sel;
}

void QuerySpec::validate() const {
    if (mode == QueryMode::direct) {
        if (!steps.empty()) throw ConfigError("direct query must not carry steps");
    } else {
        if (steps.empty()) throw ConfigError("step_wise query requires at least one step");
        for (std::size_t i = 0; i < steps.size(); ++i) {
            if (steps[i].index != static_cast<int>(i + 1)) {
                throw ConfigError("step indexes must be contiguous from 1 (question \"" +
                                  question_id + "\")");
            }
        }
    }
}

QuerySpec QuerySpec::direct(std::string question_id, std::string text) {
    QuerySpec q;
    q.mode = QueryMode::direct;
    q.question_id = std::move(question_id);
    q.direct_text = std::move(text);
    return q;
}

QuerySpec QuerySpec::step_wise(std::string question_id, std::vector<std::string> step_texts) {
    QuerySpec q;
    q.mode = QueryMode::step_wise;
    q.question_id = std::move(question_id);
    int index = 1;
    for (auto& t : step_texts) q.steps.push_back(QueryStep{index++, std::move(t)});
    return q;
}

RetrievalEngine::RetrievalEngine(Catalog catalog, CorpusScope scope, Bm25Params bm25,
                                 EmbeddingProviderSpec provider, std::filesystem::path cache_dir,
                                 RetrievalConfig config, std::string_view text_template)
    : catalog_(std::move(catalog)), config_(config) {
    config_.scope = scope;
    config_.validate();
    auto entities = to_entities(catalog_, scope, text_template);
    embedder_ = std::make_unique<Embedder>(std::move(provider), std::move(cache_dir));
    lexical_ = LexicalIndex::build(entities, bm25, scope);
    dense_ = DenseIndex::build(entities, *embedder_, scope);
}

RetrievalEngine::RetrievalEngine(Catalog catalog, LexicalIndex lexical, DenseIndex dense,
                                 EmbeddingProviderSpec provider, std::filesystem::path cache_dir,
                                 RetrievalConfig config)
    : catalog_(std::move(catalog)),
      lexical_(std::move(lexical)),
      dense_(std::move(dense)),
      config_(config) {
    config_.validate();
    if (lexical_.scope() != dense_.scope()) {
        throw ScopeMismatch("persisted lexical and dense indexes disagree on corpus scope");
    }
    config_.scope = lexical_.scope();
    embedder_ = std::make_unique<Embedder>(std::move(provider), std::move(cache_dir));
}

RankedList RetrievalEngine::top_n(const std::string& query_text) const {
    RankedList lexical = lexical_.score(query_text);

    RankedList dense;
    dense.scope = config_.scope;
    if (config_.fusion != FusionMode::lexical_only) {
        auto query_vec = embedder_->embed_one(query_text);
        if (!query_vec.is_zero) {
            dense = dense_.score(query_vec);
        }
    }

    RankedList fused = fuse(lexical, dense, config_);
    const auto n = static_cast<std::size_t>(config_.effective_top_n());
    if (fused.items.size() > n) fused.items.resize(n);
    return fused;
}

AgentSelection RetrievalEngine::retrieve(const std::string& query_text, int k) const {
    return select_agents(top_n(query_text), catalog_, k);
}

std::vector<AgentSelection> run_query(const QuerySpec& query, const RetrievalEngine& engine) {
    query.validate();
    std::vector<AgentSelection> out;
    if (query.mode == QueryMode::direct) {
        out.push_back(engine.retrieve(query.direct_text, engine.config().top_k));
    } else {
        out.reserve(query.steps.size());
        for (const auto& step : query.steps) {
            out.push_back(engine.retrieve(step.text, engine.config().top_k));
        }
    }
    return out;
}

AgentSelection agent_only_retrieve(const std::string& query_text, const RetrievalEngine& engine,
                                   int k) {
    if (engine.config().scope != CorpusScope::agents_only) {
        throw ScopeMismatch("agent_only_retrieve requires an engine built over agents_only");
    }
    return engine.retrieve(query_text, k);
}

nlohmann::json query_result_json(const QuerySpec& query,
                                 const std::vector<AgentSelection>& selections,
                                 const std::vector<RankedList>& step_lists,
                                 bool include_explanation) {
    nlohmann::json steps = nlohmann::json::array();
    for (std::size_t i = 0; i < selections.size(); ++i) {
        const auto& sel = selections[i];
        nlohmann::json supporting = nlohmann::json::object();
        for (const auto& [agent, entities] : sel.supporting_entities) {
            if (!include_explanation) {
                supporting[agent] = entities;
                continue;
            }
            nlohmann::json detail = nlohmann::json::array();
            for (const auto& key : entities) {
                nlohmann::json item{{"entity", key}};
                item["kind"] = key.rfind("agent/", 0) == 0 ? "agent" : "tool";
                if (i < step_lists.size()) {
                    for (const auto& scored : step_lists[i].items) {
                        if (scored.entity_id == key) {
                            item["score"] = scored.score;
                            break;
                        }
                    }
                }
                detail.push_back(std::move(item));
            }
            supporting[agent] = std::move(detail);
        }
        steps.push_back(nlohmann::json{{"step_index", static_cast<int>(i + 1)},
                                       {"agents", sel.agents},
                                       {"supporting", std::move(supporting)},
                                       {"exhausted", sel.exhausted_list}});
    }
    return nlohmann::json{{"question_id", query.question_id},
                          {"mode", query.mode == QueryMode::direct ? "direct" : "step_wise"},
                          {"steps", std::move(steps)}};
}

}  // namespace agentroute
