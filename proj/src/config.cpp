#include "agentroute/config.hpp"

#include <fstream>
#include <sstream>

#include "agentroute/hashing.hpp"

namespace agentroute {

nlohmann::json provider_to_json(const EmbeddingProviderSpec& spec) {
    nlohmann::json out{
        {"kind", spec.kind == ProviderKind::http_api ? "http_api" : "deterministic_hash"},
        {"model", spec.model_name},
        {"dimension", spec.dimension},
        {"batch_size", spec.batch_size},
    };
    if (spec.kind == ProviderKind::http_api) {
        out["endpoint"] = spec.endpoint;
        out["credential_env"] = spec.credential_env_var;
        out["max_retries"] = spec.max_retries;
        out["retry_backoff_ms"] = spec.retry_backoff_ms;
        out["max_in_flight"] = spec.max_in_flight;
        out["request_model_field"] = spec.request_model_field;
        out["request_input_field"] = spec.request_input_field;
        out["response_data_field"] = spec.response_data_field;
        out["response_embedding_field"] = spec.response_embedding_field;
    } else {
        out["seed"] = spec.seed;
    }
    return out;
}

EmbeddingProviderSpec provider_from_json(const nlohmann::json& doc, const std::string& context) {
    if (!doc.is_object()) throw ConfigError(context + ": provider must be an object");
    EmbeddingProviderSpec spec;
    const std::string kind = doc.value("kind", "deterministic_hash");
    if (kind == "http_api") {
        spec.kind = ProviderKind::http_api;
    } else if (kind == "deterministic_hash") {
        spec.kind = ProviderKind::deterministic_hash;
    } else {
        throw ConfigError(context + ": unknown provider kind \"" + kind + "\"");
    }
    spec.model_name = doc.value("model", spec.model_name);
    spec.endpoint = doc.value("endpoint", spec.endpoint);
    spec.dimension = doc.value("dimension", spec.dimension);
    spec.batch_size = doc.value("batch_size", spec.batch_size);
    spec.credential_env_var = doc.value("credential_env", spec.credential_env_var);
    spec.seed = doc.value("seed", spec.seed);
    spec.max_retries = doc.value("max_retries", spec.max_retries);
    spec.retry_backoff_ms = doc.value("retry_backoff_ms", spec.retry_backoff_ms);
    spec.max_in_flight = doc.value("max_in_flight", spec.max_in_flight);
    spec.request_model_field = doc.value("request_model_field", spec.request_model_field);
    spec.request_input_field = doc.value("request_input_field", spec.request_input_field);
    spec.response_data_field = doc.value("response_data_field", spec.response_data_field);
    spec.response_embedding_field =
        doc.value("response_embedding_field", spec.response_embedding_field);
    try {
        spec.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(context + ": " + e.what());
    }
    return spec;
}

RunConfig RunConfig::from_json(const nlohmann::json& doc, const std::string& context) {
    if (!doc.is_object()) throw ConfigError(context + ": config must be a JSON object");
    RunConfig cfg;
    if (doc.contains("catalog")) cfg.catalog_path = doc.at("catalog").get<std::string>();
    if (doc.contains("benchmark")) cfg.benchmark_path = doc.at("benchmark").get<std::string>();
    if (doc.contains("cache_dir")) cfg.cache_dir = doc.at("cache_dir").get<std::string>();
    if (doc.contains("output_dir")) cfg.output_dir = doc.at("output_dir").get<std::string>();
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.text_template = doc.value("entity_text_template", cfg.text_template);

    if (auto it = doc.find("providers"); it != doc.end()) {
        if (!it->is_array() || it->empty()) {
            throw ConfigError(context + ": \"providers\" must be a non-empty array");
        }
        std::size_t i = 0;
        for (const auto& p : *it) {
            cfg.providers.push_back(
                provider_from_json(p, context + ": providers[" + std::to_string(i++) + "]"));
        }
    }
    if (cfg.providers.empty()) {
        EmbeddingProviderSpec hash;
        hash.kind = ProviderKind::deterministic_hash;
        hash.model_name = "hash-512";
        hash.dimension = 512;
        cfg.providers.push_back(hash);
    }
    // The hash embedder's seed comes from the run seed unless a provider
    // pinned its own.
    for (auto& p : cfg.providers) {
        if (p.kind == ProviderKind::deterministic_hash && p.seed == 0) p.seed = cfg.seed;
    }

    if (auto it = doc.find("retrieval"); it != doc.end()) {
        const auto& r = *it;
        cfg.retrieval.top_k = r.value("top_k", cfg.retrieval.top_k);
        cfg.retrieval.top_n = r.value("top_n", cfg.retrieval.top_n);
        if (r.contains("fusion")) {
            cfg.retrieval.fusion = fusion_mode_from_string(r.at("fusion").get<std::string>());
        }
        cfg.retrieval.rrf_constant = r.value("rrf_constant", cfg.retrieval.rrf_constant);
        cfg.retrieval.dense_weight = r.value("dense_weight", cfg.retrieval.dense_weight);
        if (r.contains("scope")) {
            cfg.retrieval.scope = corpus_scope_from_string(r.at("scope").get<std::string>());
        }
        cfg.bm25.k1 = r.value("bm25_k1", cfg.bm25.k1);
        cfg.bm25.b = r.value("bm25_b", cfg.bm25.b);
    }
    cfg.retrieval.validate();

    if (auto it = doc.find("methods"); it != doc.end()) {
        if (!it->is_array() || it->empty()) {
            throw ConfigError(context + ": \"methods\" must be a non-empty array");
        }
        std::size_t i = 0;
        for (const auto& m : *it) {
            std::string locus = context + ": methods[" + std::to_string(i++) + "]";
            MethodSpec spec;
            if (!m.contains("name")) throw ConfigError(locus + ": missing \"name\"");
            spec.name = m.at("name").get<std::string>();
            spec.scope = corpus_scope_from_string(m.value("scope", "joint"));
            spec.fusion = fusion_mode_from_string(m.value("fusion", "rrf"));
            cfg.methods.push_back(std::move(spec));
        }
    } else {
        cfg.methods = default_methods();
    }

    if (auto it = doc.find("scopes"); it != doc.end()) {
        for (const auto& s : *it) {
            cfg.index_scopes.push_back(corpus_scope_from_string(s.get<std::string>()));
        }
    } else {
        cfg.index_scopes = {CorpusScope::joint, CorpusScope::agents_only};
    }

    if (auto it = doc.find("ks"); it != doc.end()) {
        cfg.ks = it->get<std::vector<int>>();
        if (cfg.ks.empty()) throw ConfigError(context + ": \"ks\" must be non-empty");
        for (int k : cfg.ks) {
            if (k < 1) throw ConfigError(context + ": metric cutoffs must be >= 1");
        }
    }

    const std::string mode = doc.value("query_mode", "step_wise");
    if (mode == "step_wise") {
        cfg.query_mode = QueryMode::step_wise;
    } else if (mode == "direct") {
        cfg.query_mode = QueryMode::direct;
    } else {
        throw ConfigError(context + ": unknown query_mode \"" + mode + "\"");
    }
    return cfg;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return from_json(doc, path.string());
}

nlohmann::json RunConfig::canonical_json() const {
    nlohmann::json providers = nlohmann::json::array();
    for (const auto& p : providers_without_secrets()) providers.push_back(p);
    nlohmann::json methods = nlohmann::json::array();
    for (const auto& m : this->methods) {
        methods.push_back(nlohmann::json{
            {"name", m.name}, {"scope", to_string(m.scope)}, {"fusion", to_string(m.fusion)}});
    }
    nlohmann::json scopes = nlohmann::json::array();
    for (auto s : index_scopes) scopes.push_back(to_string(s));
    return nlohmann::json{
        {"seed", seed},
        {"entity_text_template", text_template},
        {"providers", std::move(providers)},
        {"retrieval",
         {{"top_k", retrieval.top_k},
          {"top_n", retrieval.effective_top_n()},
          {"fusion", to_string(retrieval.fusion)},
          {"rrf_constant", retrieval.rrf_constant},
          {"dense_weight", retrieval.dense_weight},
          {"scope", to_string(retrieval.scope)},
          {"bm25_k1", bm25.k1},
          {"bm25_b", bm25.b}}},
        {"methods", std::move(methods)},
        {"scopes", std::move(scopes)},
        {"ks", ks},
        {"query_mode", query_mode == QueryMode::step_wise ? "step_wise" : "direct"},
        // Query and entity texts are embedded raw; no preprocessing is
        // applied on either side. Recorded so runs are comparable.
        {"text_preprocessing", "none"},
    };
}

std::vector<nlohmann::json> RunConfig::providers_without_secrets() const {
    std::vector<nlohmann::json> out;
    for (const auto& p : providers) {
        auto obj = provider_to_json(p);
        obj.erase("credential_env");  // names only an env var, but keep hashes content-based
        out.push_back(std::move(obj));
    }
    return out;
}

std::string RunConfig::config_hash() const {
    std::string blob = canonical_json().dump();
    for (const auto* path : {&catalog_path, &benchmark_path}) {
        if (path->empty()) continue;
        std::ifstream in(*path, std::ios::binary);
        if (!in) continue;  // commands that need the file validate separately
        std::stringstream ss;
        ss << in.rdbuf();
        blob += "\x1f" + ss.str();
    }
    return content_key(blob);
}

EvaluationOptions RunConfig::evaluation_options() const {
    EvaluationOptions opts;
    opts.bm25 = bm25;
    opts.retrieval = retrieval;
    opts.ks = ks;
    opts.query_mode = query_mode;
    opts.cache_dir = cache_dir;
    opts.text_template = text_template;
    return opts;
}

}  // namespace agentroute
