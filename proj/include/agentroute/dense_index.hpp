#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "agentroute/embedding.hpp"
#include "agentroute/ranked_list.hpp"

namespace agentroute {

/**
 * Brute-force dense index: one unit vector per entity, row-major float
 * storage, exact cosine scoring (dot product of unit vectors) against every
 * row. Exhaustive by design — the corpora are a few hundred entities, so
 * exactness beats ANN here. Immutable after build.
 */
class DenseIndex {
  public:
    DenseIndex() = default;

    static DenseIndex build(const std::vector<CatalogEntity>& entities, Embedder& embedder,
                            CorpusScope scope);

    /// Scores for *all* entities, descending with ties by ordinal. Requires
    /// a normalized query of matching dimension (throws DimensionMismatch).
    RankedList score(const EmbeddingVector& query) const;

    std::size_t size() const { return entity_ids_.size(); }
    std::size_t dimension() const { return dimension_; }
    const std::string& provider_fingerprint() const { return fingerprint_; }
    CorpusScope scope() const { return scope_; }

    /// Unit vector for one ordinal (test/debug accessor).
    std::span<const float> row(std::size_t ordinal) const;

    // Versioned little-endian binary format; load rejects other versions.
    void save(const std::filesystem::path& path) const;
    static DenseIndex load(const std::filesystem::path& path);

  private:
    std::vector<float> matrix_;  // row-major, size() * dimension_
    std::vector<std::string> entity_ids_;
    std::vector<EntityKind> entity_kinds_;
    std::vector<bool> zero_rows_;
    std::size_t dimension_ = 0;
    std::string fingerprint_;
    CorpusScope scope_ = CorpusScope::joint;
};

}  // namespace agentroute
