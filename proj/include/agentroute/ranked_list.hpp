#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "agentroute/catalog.hpp"

namespace agentroute {

/// Per-ranking provenance of a fused score: 1-based ranks in the source
/// lists, absent when the entity did not appear in that list.
struct SourceRanks {
    std::optional<int> lexical;
    std::optional<int> dense;
};

struct ScoredEntity {
    std::string entity_id;  // prefixed catalog key ("agent/..." / "tool/...")
    EntityKind kind = EntityKind::agent;
    double score = 0.0;
    std::size_t ordinal = 0;  // position in the scope's entity list; tie-break key
    std::optional<SourceRanks> source_ranks;
};

/// Ordered scored entities. Invariants: scores non-increasing, ties broken
/// by ordinal ascending, no duplicate entity ids. `scope` tags which corpus
/// the ordinals refer to so mismatched lists are never fused.
struct RankedList {
    std::vector<ScoredEntity> items;
    CorpusScope scope = CorpusScope::joint;

    std::size_t size() const { return items.size(); }
    bool empty() const { return items.empty(); }
};

/// Sort by (score desc, ordinal asc). Every producer funnels through this so
/// tie-breaking is identical across lexical, dense, and fused lists.
void sort_ranked(std::vector<ScoredEntity>& items);

}  // namespace agentroute
