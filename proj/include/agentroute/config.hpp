#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "agentroute/evaluation.hpp"

namespace agentroute {

/**
 * One declarative run manifest shared by every subcommand; CLI flags
 * override individual keys. See README for the key reference.
 */
struct RunConfig {
    std::filesystem::path catalog_path;
    std::filesystem::path benchmark_path;
    std::filesystem::path cache_dir = ".agentroute-cache";
    std::filesystem::path output_dir = "out";
    std::uint64_t seed = 0;

    std::vector<EmbeddingProviderSpec> providers;  // defaults to hash-512
    RetrievalConfig retrieval;
    Bm25Params bm25;
    std::vector<MethodSpec> methods;       // defaults to default_methods()
    std::vector<CorpusScope> index_scopes; // scopes cmd_index builds
    std::vector<int> ks = {1, 3, 5, 10};
    QueryMode query_mode = QueryMode::step_wise;
    std::string text_template = std::string(kDefaultTextTemplate);

    static RunConfig from_json(const nlohmann::json& doc, const std::string& context);
    static RunConfig from_file(const std::filesystem::path& path);

    /// Canonical form of the semantically relevant keys (paths excluded, so
    /// runs differing only in directories hash identically).
    nlohmann::json canonical_json() const;

    /// Stable hash of canonical_json plus the catalog/benchmark contents,
    /// recorded in every output artifact.
    std::string config_hash() const;

    EvaluationOptions evaluation_options() const;

    std::vector<nlohmann::json> providers_without_secrets() const;
};

nlohmann::json provider_to_json(const EmbeddingProviderSpec& spec);
EmbeddingProviderSpec provider_from_json(const nlohmann::json& doc, const std::string& context);

}  // namespace agentroute
