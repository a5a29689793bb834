#include "agentroute/commands.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "agentroute/convert.hpp"
#include "agentroute/hashing.hpp"
#include "agentroute/server.hpp"
#include "agentroute/simd/kernels.hpp"

namespace agentroute {

namespace {

constexpr const char* kBundleFormat = "agentroute-index-bundle/v1";

std::string file_sha(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return content_key(ss.str());
}

std::string model_key(const EmbeddingProviderSpec& spec) {
    std::string key;
    for (char c : spec.model_name) {
        key.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    }
    return key;
}

std::filesystem::path bundle_dir(const RunConfig& config) {
    return config.output_dir / "index";
}

nlohmann::json fusion_settings(const RunConfig& config) {
    return nlohmann::json{{"fusion", to_string(config.retrieval.fusion)},
                          {"rrf_constant", config.retrieval.rrf_constant},
                          {"dense_weight", config.retrieval.dense_weight},
                          {"top_n", config.retrieval.effective_top_n()},
                          {"top_k", config.retrieval.top_k},
                          {"bm25_k1", config.bm25.k1},
                          {"bm25_b", config.bm25.b}};
}

nlohmann::json run_metadata(const RunConfig& config) {
    nlohmann::json fingerprints = nlohmann::json::array();
    for (const auto& p : config.providers) fingerprints.push_back(p.fingerprint());
    return nlohmann::json{{"config_hash", config.config_hash()},
                          {"seed", config.seed},
                          {"provider_fingerprints", std::move(fingerprints)},
                          {"fusion_settings", fusion_settings(config)},
                          {"entity_text_template", config.text_template},
                          {"text_preprocessing", "none"},
                          {"simd_backend", simd::backend_name(simd::active_backend())}};
}

RunConfig require_catalog(const RunConfig& config) {
    if (config.catalog_path.empty()) throw ConfigError("no catalog path configured");
    if (!std::filesystem::exists(config.catalog_path)) {
        throw ConfigError("catalog file does not exist: " + config.catalog_path.string());
    }
    return config;
}

/// Load the persisted bundle for one scope and the first configured
/// provider, verifying it still matches the catalog and config.
RetrievalEngine load_engine_from_bundle(const RunConfig& config, CorpusScope scope,
                                        nlohmann::json* fingerprints_out = nullptr) {
    const auto dir = bundle_dir(config);
    const auto manifest_path = dir / "manifest.json";
    std::ifstream in(manifest_path);
    if (!in) {
        throw IoError("index bundle not found at " + dir.string() + " (run `index` first)");
    }
    nlohmann::json manifest;
    try {
        manifest = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(manifest_path.string() + ": " + e.what());
    }
    if (manifest.value("format", "") != kBundleFormat) {
        throw ParseError(manifest_path.string() + ": unsupported bundle format");
    }

    Catalog catalog = load_catalog(config.catalog_path);
    const std::string catalog_sha = file_sha(config.catalog_path);
    if (manifest.value("catalog_sha", "") != catalog_sha) {
        throw ValidationError("catalog has changed since the bundle was built; re-run `index`");
    }

    const auto& provider = config.providers.front();
    const std::string scope_name = to_string(scope);
    auto scopes_it = manifest.find("scopes");
    if (scopes_it == manifest.end() || !scopes_it->contains(scope_name)) {
        throw ValidationError("bundle does not contain scope \"" + scope_name +
                              "\"; re-run `index` with it configured");
    }
    const auto& scope_entry = (*scopes_it)[scope_name];
    const std::string mkey = model_key(provider);
    if (!scope_entry.at("dense").contains(mkey)) {
        throw ValidationError("bundle has no dense index for provider " + provider.fingerprint());
    }

    LexicalIndex lexical =
        LexicalIndex::load(dir / scope_entry.at("lexical").get<std::string>());
    DenseIndex dense =
        DenseIndex::load(dir / scope_entry.at("dense").at(mkey).get<std::string>());
    if (dense.provider_fingerprint() != provider.fingerprint()) {
        throw ValidationError("bundle dense index fingerprint " + dense.provider_fingerprint() +
                              " does not match configured provider " + provider.fingerprint());
    }

    if (fingerprints_out != nullptr) {
        *fingerprints_out = nlohmann::json{{"provider_fingerprint", dense.provider_fingerprint()},
                                           {"catalog_sha", catalog_sha},
                                           {"config_hash", manifest.value("config_hash", "")},
                                           {"scope", scope_name},
                                           {"entities", dense.size()}};
    }

    RetrievalConfig rc = config.retrieval;
    rc.scope = scope;
    return RetrievalEngine(std::move(catalog), std::move(lexical), std::move(dense), provider,
                           config.cache_dir, rc);
}

QuerySpec parse_steps_file(const std::filesystem::path& path, const std::string& question_id) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open steps file: " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }

    std::vector<std::string> texts;
    std::string qid = question_id;
    const nlohmann::json* steps = nullptr;
    if (doc.is_array()) {
        steps = &doc;
    } else if (doc.is_object()) {
        if (doc.contains("question_id")) qid = doc.at("question_id").get<std::string>();
        if (doc.contains("steps")) steps = &doc.at("steps");
    }
    if (steps == nullptr || !steps->is_array() || steps->empty()) {
        throw ParseError(path.string() +
                         ": expected a JSON array of steps or {question_id, steps:[...]}");
    }
    for (const auto& s : *steps) {
        if (s.is_string()) {
            texts.push_back(s.get<std::string>());
        } else if (s.is_object() && s.contains("text")) {
            texts.push_back(s.at("text").get<std::string>());
        } else {
            throw ParseError(path.string() + ": steps must be strings or {index, text} objects");
        }
    }
    return QuerySpec::step_wise(qid, std::move(texts));
}

}  // namespace

int cmd_index(const RunConfig& config_in, std::ostream& out) {
    const RunConfig config = require_catalog(config_in);
    Catalog catalog = load_catalog(config.catalog_path);

    const auto dir = bundle_dir(config);
    std::filesystem::create_directories(dir);

    nlohmann::json scopes = nlohmann::json::object();
    for (CorpusScope scope : config.index_scopes) {
        auto entities = to_entities(catalog, scope, config.text_template);
        if (entities.empty()) {
            throw ValidationError(std::string("scope ") + to_string(scope) +
                                  " produced an empty corpus");
        }
        const std::string scope_name = to_string(scope);
        const std::string lexical_file = "lexical_" + scope_name + ".json";
        LexicalIndex::build(entities, config.bm25, scope).save(dir / lexical_file);

        nlohmann::json dense_files = nlohmann::json::object();
        for (const auto& provider : config.providers) {
            Embedder embedder(provider, config.cache_dir);
            const std::string dense_file =
                "dense_" + scope_name + "_" + model_key(provider) + ".bin";
            DenseIndex::build(entities, embedder, scope).save(dir / dense_file);
            dense_files[model_key(provider)] = dense_file;
        }
        scopes[scope_name] = nlohmann::json{{"entities", entities.size()},
                                            {"lexical", lexical_file},
                                            {"dense", std::move(dense_files)}};
    }

    nlohmann::json manifest{{"format", kBundleFormat},
                            {"catalog_sha", file_sha(config.catalog_path)},
                            {"config_hash", config.config_hash()},
                            {"seed", config.seed},
                            {"entity_text_template", config.text_template},
                            {"providers", config.providers_without_secrets()},
                            {"retrieval", fusion_settings(config)},
                            {"scopes", std::move(scopes)}};
    {
        std::ofstream mf(dir / "manifest.json");
        if (!mf) throw IoError("cannot write manifest: " + (dir / "manifest.json").string());
        mf << manifest.dump(2) << "\n";
    }

    const auto agents = catalog.agents().size();
    const auto tools = catalog.tools().size();
    out << "agents=" << agents << " tools=" << tools << " joint=" << (agents + tools) << "\n";
    out << "index bundle written to " << dir.string() << "\n";
    return 0;
}

int cmd_query(const RunConfig& config_in, const QueryInput& input, std::ostream& out) {
    const RunConfig config = require_catalog(config_in);
    if (!input.direct_text.has_value() && !input.steps_file.has_value()) {
        throw ConfigError("query requires either text or a steps file");
    }
    if (input.direct_text.has_value() && input.steps_file.has_value()) {
        throw ConfigError("query takes either text or a steps file, not both");
    }
    const int k = input.k.value_or(config.retrieval.top_k);
    if (k < 1) throw ConfigError("k must be >= 1");

    RetrievalEngine engine = load_engine_from_bundle(config, config.retrieval.scope);

    QuerySpec query = input.direct_text.has_value()
                          ? QuerySpec::direct(input.question_id, *input.direct_text)
                          : parse_steps_file(*input.steps_file, input.question_id);
    query.validate();

    std::vector<std::string> texts;
    if (query.mode == QueryMode::direct) {
        texts.push_back(query.direct_text);
    } else {
        for (const auto& step : query.steps) texts.push_back(step.text);
    }

    std::vector<AgentSelection> selections;
    std::vector<RankedList> lists;
    for (const auto& text : texts) {
        lists.push_back(engine.top_n(text));
        selections.push_back(select_agents(lists.back(), engine.catalog(), k));
    }
    out << query_result_json(query, selections, lists, input.explain).dump(2) << "\n";
    return 0;
}

int cmd_eval(const RunConfig& config_in, std::ostream& out) {
    const RunConfig config = require_catalog(config_in);
    if (config.benchmark_path.empty()) throw ConfigError("no benchmark path configured");
    Catalog catalog = load_catalog(config.catalog_path);
    auto benchmark = load_benchmark(config.benchmark_path, catalog);
    auto stats = benchmark_stats(benchmark);

    std::filesystem::create_directories(config.output_dir);
    auto metadata = run_metadata(config);
    metadata["corpus"] = {{"agents", catalog.agents().size()}, {"tools", catalog.tools().size()}};
    metadata["benchmark"] = {{"questions", stats.question_count},
                             {"steps", stats.step_count},
                             {"avg_steps_per_question", stats.avg_steps_per_question},
                             {"avg_relevant_agents_per_question",
                              stats.avg_relevant_agents_per_question},
                             {"avg_relevant_tools_per_question",
                              stats.avg_relevant_tools_per_question}};

    std::ofstream step_log(config.output_dir / "steps.jsonl");
    if (!step_log) {
        throw IoError("cannot write step log: " + (config.output_dir / "steps.jsonl").string());
    }
    step_log << nlohmann::json{{"run_metadata", metadata}}.dump() << "\n";
    auto run = run_evaluation(catalog, benchmark, config.methods, config.providers,
                              config.evaluation_options(), &step_log);

    metadata["across_models"] = across_model_summary(run.reports, config.retrieval.top_k);
    emit_report(run.reports, ReportFormat::json, config.output_dir / "report.json", metadata);
    emit_report(run.reports, ReportFormat::csv, config.output_dir / "report.csv", metadata);
    emit_report(run.reports, ReportFormat::markdown_table, config.output_dir / "report.md",
                metadata);
    {
        std::ofstream pq(config.output_dir / "per_question.json");
        if (!pq) throw IoError("cannot write per-question log");
        pq << nlohmann::json{{"run_metadata", metadata}, {"per_question", run.per_question}}
                  .dump(2)
           << "\n";
    }

    out << render_report(run.reports, ReportFormat::markdown_table, metadata);
    for (const auto& r : run.reports) {
        if (!r.error.empty()) {
            out << "method " << r.method_name << " (" << r.embedding_model
                << ") failed: " << r.error << "\n";
        }
    }
    return 0;
}

int cmd_serve(const RunConfig& config, const std::string& host, int port, std::ostream& out) {
    nlohmann::json fingerprints;
    auto engine = std::make_shared<const RetrievalEngine>(
        load_engine_from_bundle(require_catalog(config), config.retrieval.scope, &fingerprints));
    auto service = std::make_shared<const RouteService>(engine, fingerprints);

    httplib::Server server;
    attach_routes(server, service);
    out << "serving on " << host << ":" << port << "\n";
    if (!server.listen(host, port)) {
        throw IoError("failed to bind " + host + ":" + std::to_string(port));
    }
    return 0;
}

int cmd_convert(const std::filesystem::path& servers_path,
                const std::filesystem::path& questions_path,
                const std::filesystem::path& out_catalog,
                const std::filesystem::path& out_benchmark, std::ostream& out) {
    auto read = [](const std::filesystem::path& p) {
        std::ifstream in(p);
        if (!in) throw IoError("cannot open " + p.string());
        try {
            return nlohmann::json::parse(in);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(p.string() + ": " + e.what());
        }
    };

    auto catalog_doc = convert_servers(read(servers_path), servers_path.string());
    {
        std::ofstream o(out_catalog);
        if (!o) throw IoError("cannot write " + out_catalog.string());
        o << catalog_doc.dump(2) << "\n";
    }
    // Validate the converted catalog immediately so broken conversions fail
    // here rather than at first use.
    Catalog catalog = Catalog::from_json(catalog_doc, out_catalog.string());
    out << "catalog: agents=" << catalog.agents().size() << " tools=" << catalog.tools().size()
        << " -> " << out_catalog.string() << "\n";

    if (!questions_path.empty()) {
        auto benchmark_doc =
            convert_questions(read(questions_path), catalog_doc, questions_path.string());
        {
            std::ofstream o(out_benchmark);
            if (!o) throw IoError("cannot write " + out_benchmark.string());
            o << benchmark_doc.dump(2) << "\n";
        }
        out << "benchmark: questions=" << benchmark_doc.size() << " -> "
            << out_benchmark.string() << "\n";
    }
    return 0;
}

int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e) != nullptr) return 1;
    if (dynamic_cast<const CredentialMissing*>(&e) != nullptr) return 3;
    if (dynamic_cast<const ProviderError*>(&e) != nullptr) return 3;
    if (dynamic_cast<const DimensionMismatch*>(&e) != nullptr) return 3;
    if (dynamic_cast<const Error*>(&e) != nullptr) return 2;  // data-class errors
    return 1;
}

}  // namespace agentroute
