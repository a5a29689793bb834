#pragma once

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "agentroute/errors.hpp"

namespace agentroute {

/// Unit-norm embedding. A text with no tokens (or a provider returning all
/// zeros) produces the all-zero vector with `is_zero` set; it is left
/// unnormalized and scores zero against everything.
struct EmbeddingVector {
    std::vector<float> values;
    bool is_zero = false;

    std::size_t dimension() const { return values.size(); }
};

/// L2-normalize in place (double-precision accumulation). Flags and leaves
/// the zero vector untouched.
void normalize(EmbeddingVector& v);

double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

enum class ProviderKind { http_api, deterministic_hash };

/// One embedding backend. `http_api` speaks the common embeddings shape
/// (request {model, input:[...]}, response {data:[{embedding:[...]}]}) with
/// the field names configurable; `deterministic_hash` is the offline,
/// seed-stable embedder used for tests and desk-scale runs.
struct EmbeddingProviderSpec {
    ProviderKind kind = ProviderKind::deterministic_hash;
    std::string model_name = "hash-512";
    std::string endpoint;  // http_api only, e.g. https://api.openai.com/v1/embeddings
    int dimension = 512;
    int batch_size = 32;
    std::string credential_env_var;  // http_api only
    std::uint64_t seed = 0;          // deterministic_hash only

    // http plumbing
    int max_retries = 3;        // total attempts per request
    int retry_backoff_ms = 250; // doubled per attempt
    int max_in_flight = 4;      // concurrent batch requests
    std::string request_model_field = "model";
    std::string request_input_field = "input";
    std::string response_data_field = "data";
    std::string response_embedding_field = "embedding";

    std::string fingerprint() const { return model_name + ":" + std::to_string(dimension); }
    void validate() const;
};

/// Seed-stable bag-of-tokens embedding: each token hashes to one coordinate
/// and a sign, occurrences accumulate, result is L2-normalized. Shared
/// vocabulary between two texts therefore yields positive cosine. Dimension
/// must be >= 8.
EmbeddingVector hash_embed(std::string_view text, std::size_t dimension, std::uint64_t seed = 0);

struct ProviderStats {
    std::size_t http_requests = 0;
    std::size_t cache_hits = 0;
    std::size_t cache_misses = 0;
    std::size_t retries = 0;
};

/**
 * Embedding front end: provider + content-addressed on-disk cache.
 *
 * Cache entries are keyed by hash(model_name, text), one JSON file per key,
 * so repeated runs against paid APIs are resumable and a warm run issues
 * zero network requests. Thread-safe; the cache has a single-writer lock.
 */
class Embedder {
  public:
    explicit Embedder(EmbeddingProviderSpec spec, std::filesystem::path cache_dir = {});

    /// One normalized vector per input text, order preserved. Throws
    /// CredentialMissing, ProviderError, DimensionMismatch.
    std::vector<EmbeddingVector> embed_batch(const std::vector<std::string>& texts);

    EmbeddingVector embed_one(const std::string& text);

    const EmbeddingProviderSpec& spec() const { return spec_; }
    ProviderStats stats() const;

  private:
    std::filesystem::path cache_path(const std::string& text) const;
    bool cache_lookup(const std::string& text, EmbeddingVector& out);
    void cache_store(const std::string& text, const EmbeddingVector& v);
    std::vector<EmbeddingVector> fetch_http(const std::vector<std::string>& texts);
    std::vector<EmbeddingVector> post_chunk(const std::vector<std::string>& chunk,
                                            const std::string& credential);

    EmbeddingProviderSpec spec_;
    std::filesystem::path cache_dir_;
    mutable std::mutex mu_;
    ProviderStats stats_;
};

}  // namespace agentroute
