#include "agentroute/embedding.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "agentroute/hashing.hpp"
#include "agentroute/lexical_index.hpp"
#include "agentroute/simd/kernels.hpp"

namespace agentroute {

void normalize(EmbeddingVector& v) {
    const double norm = simd::l2_norm(v.values);
    if (norm == 0.0) {
        v.is_zero = true;
        return;
    }
    const float inv = static_cast<float>(1.0 / norm);
    for (float& x : v.values) x *= inv;
    v.is_zero = false;
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dimension() != b.dimension()) {
        throw DimensionMismatch("cosine: dimension " + std::to_string(a.dimension()) + " vs " +
                                std::to_string(b.dimension()));
    }
    return simd::dot(a.values, b.values);
}

void EmbeddingProviderSpec::validate() const {
    if (dimension <= 0) throw ConfigError("provider dimension must be > 0");
    if (batch_size < 1) throw ConfigError("provider batch_size must be >= 1");
    if (kind == ProviderKind::http_api && endpoint.empty()) {
        throw ConfigError("http_api provider requires an endpoint");
    }
    if (kind == ProviderKind::deterministic_hash && dimension < 8) {
        throw ConfigError("deterministic_hash provider requires dimension >= 8");
    }
}

EmbeddingVector hash_embed(std::string_view text, std::size_t dimension, std::uint64_t seed) {
    if (dimension < 8) throw ConfigError("hash_embed requires dimension >= 8");
    EmbeddingVector v;
    v.values.assign(dimension, 0.0f);
    const std::uint64_t seed_mix = mix64(seed);
    auto tokens = tokenize(text);
    for (const auto& tok : tokens) {
        const std::uint64_t h = mix64(fnv1a64(tok) ^ seed_mix);
        const std::size_t coord = static_cast<std::size_t>(h % dimension);
        const float sign = (h >> 63) ? -1.0f : 1.0f;
        v.values[coord] += sign;
    }
    normalize(v);
    return v;
}

Embedder::Embedder(EmbeddingProviderSpec spec, std::filesystem::path cache_dir)
    : spec_(std::move(spec)), cache_dir_(std::move(cache_dir)) {
    spec_.validate();
    if (!cache_dir_.empty()) {
        std::filesystem::create_directories(cache_dir_);
    }
}

ProviderStats Embedder::stats() const {
    std::lock_guard lock(mu_);
    return stats_;
}

std::filesystem::path Embedder::cache_path(const std::string& text) const {
    const std::string key = content_key(spec_.model_name + "\x1f" + text);
    return cache_dir_ / (key + ".json");
}

bool Embedder::cache_lookup(const std::string& text, EmbeddingVector& out) {
    if (cache_dir_.empty()) return false;
    const auto path = cache_path(text);
    std::ifstream in(path);
    if (!in) return false;
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error&) {
        return false;  // corrupt entry, refetch
    }
    if (doc.value("model", "") != spec_.model_name || doc.value("text", "") != text) {
        return false;  // key collision guard
    }
    out.values = doc.at("embedding").get<std::vector<float>>();
    out.is_zero = doc.value("zero", false);
    if (out.values.size() != static_cast<std::size_t>(spec_.dimension)) return false;
    return true;
}

void Embedder::cache_store(const std::string& text, const EmbeddingVector& v) {
    if (cache_dir_.empty()) return;
    nlohmann::json doc{
        {"model", spec_.model_name},
        {"dimension", spec_.dimension},
        {"text", text},
        {"embedding", v.values},
        {"zero", v.is_zero},
    };
    const auto path = cache_path(text);
    const auto tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp);
        if (!out) throw IoError("cannot write embedding cache entry: " + tmp);
        out << doc.dump();
    }
    std::filesystem::rename(tmp, path);
}

std::vector<EmbeddingVector> Embedder::embed_batch(const std::vector<std::string>& texts) {
    if (texts.empty()) return {};

    if (spec_.kind == ProviderKind::deterministic_hash) {
        std::vector<EmbeddingVector> out;
        out.reserve(texts.size());
        for (const auto& t : texts) {
            out.push_back(hash_embed(t, static_cast<std::size_t>(spec_.dimension), spec_.seed));
        }
        return out;
    }

    std::vector<EmbeddingVector> out(texts.size());
    std::vector<std::size_t> misses;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        std::lock_guard lock(mu_);
        if (cache_lookup(texts[i], out[i])) {
            ++stats_.cache_hits;
        } else {
            ++stats_.cache_misses;
            misses.push_back(i);
        }
    }
    if (misses.empty()) return out;

    std::vector<std::string> miss_texts;
    miss_texts.reserve(misses.size());
    for (auto i : misses) miss_texts.push_back(texts[i]);

    auto fetched = fetch_http(miss_texts);
    for (std::size_t j = 0; j < misses.size(); ++j) {
        out[misses[j]] = fetched[j];
        std::lock_guard lock(mu_);
        cache_store(miss_texts[j], fetched[j]);
    }
    return out;
}

EmbeddingVector Embedder::embed_one(const std::string& text) {
    return embed_batch({text}).front();
}

namespace {

// "http://host:port/path" -> {"http://host:port", "/path"}
std::pair<std::string, std::string> split_endpoint(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("endpoint must start with http:// or https://: " + url);
    }
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::vector<EmbeddingVector> Embedder::fetch_http(const std::vector<std::string>& texts) {
    std::string credential;
    if (!spec_.credential_env_var.empty()) {
        const char* value = std::getenv(spec_.credential_env_var.c_str());
        if (value == nullptr || *value == '\0') {
            throw CredentialMissing("environment variable " + spec_.credential_env_var +
                                    " is not set (required by provider " + spec_.model_name + ")");
        }
        credential = value;
    }

    // Chunk by batch_size, then run chunks in waves of max_in_flight.
    std::vector<std::vector<std::string>> chunks;
    for (std::size_t i = 0; i < texts.size(); i += spec_.batch_size) {
        const auto end = std::min(texts.size(), i + static_cast<std::size_t>(spec_.batch_size));
        chunks.emplace_back(texts.begin() + static_cast<long>(i), texts.begin() + static_cast<long>(end));
    }

    std::vector<std::vector<EmbeddingVector>> chunk_results(chunks.size());
    const std::size_t wave = std::max(1, spec_.max_in_flight);
    for (std::size_t base = 0; base < chunks.size(); base += wave) {
        const std::size_t end = std::min(chunks.size(), base + wave);
        std::vector<std::future<std::vector<EmbeddingVector>>> futures;
        for (std::size_t c = base; c < end; ++c) {
            futures.push_back(std::async(std::launch::async, [this, &chunks, &credential, c] {
                return post_chunk(chunks[c], credential);
            }));
        }
        for (std::size_t c = base; c < end; ++c) {
            chunk_results[c] = futures[c - base].get();
        }
    }

    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (auto& r : chunk_results) {
        for (auto& v : r) out.push_back(std::move(v));
    }
    return out;
}

std::vector<EmbeddingVector> Embedder::post_chunk(const std::vector<std::string>& chunk,
                                                  const std::string& credential) {
    auto [base, path] = split_endpoint(spec_.endpoint);
    httplib::Client client(base);
    client.set_connection_timeout(10, 0);
    client.set_read_timeout(60, 0);

    nlohmann::json body{{spec_.request_model_field, spec_.model_name},
                        {spec_.request_input_field, chunk}};
    httplib::Headers headers;
    if (!credential.empty()) {
        headers.emplace("Authorization", "Bearer " + credential);
    }

    const int attempts_max = std::max(1, spec_.max_retries);
    int last_status = 0;
    std::string last_detail;
    for (int attempt = 1; attempt <= attempts_max; ++attempt) {
        {
            std::lock_guard lock(mu_);
            ++stats_.http_requests;
            if (attempt > 1) ++stats_.retries;
        }
        auto res = client.Post(path, headers, body.dump(), "application/json");
        if (res && res->status >= 200 && res->status < 300) {
            nlohmann::json doc;
            try {
                doc = nlohmann::json::parse(res->body);
            } catch (const nlohmann::json::parse_error& e) {
                throw ProviderError(std::string("provider returned unparseable body: ") + e.what(),
                                    res->status, attempt);
            }
            auto data_it = doc.find(spec_.response_data_field);
            if (data_it == doc.end() || !data_it->is_array() || data_it->size() != chunk.size()) {
                throw ProviderError("provider response missing \"" + spec_.response_data_field +
                                        "\" array of length " + std::to_string(chunk.size()),
                                    res->status, attempt);
            }
            std::vector<EmbeddingVector> vecs(chunk.size());
            std::size_t position = 0;
            for (const auto& item : *data_it) {
                auto emb_it = item.find(spec_.response_embedding_field);
                if (emb_it == item.end() || !emb_it->is_array()) {
                    throw ProviderError("provider item missing \"" +
                                            spec_.response_embedding_field + "\" array",
                                        res->status, attempt);
                }
                // Honor an explicit index field when present (the common API
                // shape allows out-of-order items); fall back to position.
                std::size_t slot = position;
                if (auto idx_it = item.find("index"); idx_it != item.end() && idx_it->is_number()) {
                    slot = idx_it->get<std::size_t>();
                }
                if (slot >= vecs.size()) {
                    throw ProviderError("provider item index out of range", res->status, attempt);
                }
                EmbeddingVector v;
                v.values = emb_it->get<std::vector<float>>();
                if (v.values.size() != static_cast<std::size_t>(spec_.dimension)) {
                    throw DimensionMismatch(
                        "provider " + spec_.model_name + " returned dimension " +
                        std::to_string(v.values.size()) + ", expected " +
                        std::to_string(spec_.dimension));
                }
                normalize(v);
                vecs[slot] = std::move(v);
                ++position;
            }
            return vecs;
        }

        const bool transient = !res || res->status >= 500;
        last_status = res ? res->status : 0;
        last_detail = res ? ("HTTP " + std::to_string(res->status))
                          : ("transport error: " + httplib::to_string(res.error()));
        if (!transient) {
            throw ProviderError("provider request failed (" + last_detail + ")", last_status,
                                attempt);
        }
        if (attempt < attempts_max) {
            const int delay = spec_.retry_backoff_ms * (1 << (attempt - 1));
            std::cerr << "provider request failed (attempt " << attempt << "/" << attempts_max
                      << "): " << last_detail << "; retrying in " << delay << " ms\n";
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
    }
    throw ProviderError("provider request failed after " + std::to_string(attempts_max) +
                            " attempts (" + last_detail + ")",
                        last_status, attempts_max);
}

}  // namespace agentroute
