#pragma once

#include <set>
#include <span>
#include <string>

namespace agentroute {

// Ranked-retrieval metrics over ground-truth agent sets, binary relevance.
// All three throw EmptyRelevantSet when `relevant` is empty and
// std::invalid_argument when k < 1.

/// |top-k(retrieved) ∩ relevant| / |relevant|.
double recall_at_k(std::span<const std::string> retrieved, const std::set<std::string>& relevant,
                   int k);

/// AP@k = (1/min(k,|relevant|)) * sum_{i=1..k} [retrieved_i relevant] * precision@i.
double ap_at_k(std::span<const std::string> retrieved, const std::set<std::string>& relevant,
               int k);

/// nDCG@k with binary gains: DCG@k = sum_{i=1..k} [retrieved_i relevant] / log2(i+1),
/// normalized by the DCG of the ideal ordering (min(k,|relevant|) hits first).
double ndcg_at_k(std::span<const std::string> retrieved, const std::set<std::string>& relevant,
                 int k);

}  // namespace agentroute
