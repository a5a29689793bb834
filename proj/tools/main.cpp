#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "agentroute/commands.hpp"

using namespace agentroute;

namespace {

// Flag values collected before the config file is loaded; flags override
// config keys.
struct Overrides {
    std::optional<std::string> catalog;
    std::optional<std::string> benchmark;
    std::optional<std::string> cache_dir;
    std::optional<std::string> output_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> top_k;
    std::optional<int> top_n;
    std::optional<std::string> fusion;
    std::optional<std::string> scope;
};

RunConfig effective_config(const std::optional<std::string>& config_path, const Overrides& o) {
    RunConfig cfg = config_path.has_value() ? RunConfig::from_file(*config_path)
                                            : RunConfig::from_json(nlohmann::json::object(), "<defaults>");
    if (o.catalog) cfg.catalog_path = *o.catalog;
    if (o.benchmark) cfg.benchmark_path = *o.benchmark;
    if (o.cache_dir) cfg.cache_dir = *o.cache_dir;
    if (o.output_dir) cfg.output_dir = *o.output_dir;
    if (o.seed) {
        cfg.seed = *o.seed;
        for (auto& p : cfg.providers) {
            if (p.kind == ProviderKind::deterministic_hash) p.seed = cfg.seed;
        }
    }
    if (o.top_k) cfg.retrieval.top_k = *o.top_k;
    if (o.top_n) cfg.retrieval.top_n = *o.top_n;
    if (o.fusion) cfg.retrieval.fusion = fusion_mode_from_string(*o.fusion);
    if (o.scope) cfg.retrieval.scope = corpus_scope_from_string(*o.scope);
    cfg.retrieval.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"agentroute: joint tool+agent retrieval engine and evaluation harness"};
    app.require_subcommand(1);

    std::optional<std::string> config_path;
    Overrides o;
    app.add_option("--config", config_path, "JSON run config (flags override its keys)");
    app.add_option("--catalog", o.catalog, "catalog JSON path");
    app.add_option("--benchmark", o.benchmark, "benchmark JSON path");
    app.add_option("--cache-dir", o.cache_dir, "embedding cache directory");
    app.add_option("--output-dir", o.output_dir, "output directory");
    app.add_option("--seed", o.seed, "seed for the deterministic hash embedder");
    app.add_option("--k", o.top_k, "top-K agents to select");
    app.add_option("--n", o.top_n, "candidate list depth N (0 = auto)");
    app.add_option("--fusion", o.fusion, "rrf | weighted_sum | dense_only | lexical_only");
    app.add_option("--scope", o.scope, "joint | agents_only | tools_only");

    auto* index_cmd = app.add_subcommand("index", "build and persist the index bundle");

    auto* query_cmd = app.add_subcommand("query", "retrieve top-K agents for a query");
    QueryInput qin;
    std::optional<std::string> steps_file;
    query_cmd->add_option("--q,--text", qin.direct_text, "direct query text");
    query_cmd->add_option("--steps-file", steps_file, "JSON steps file (step-wise querying)");
    query_cmd->add_option("--question-id", qin.question_id, "id echoed into the result");
    query_cmd->add_option("--k", qin.k, "override top-K for this query");
    query_cmd->add_flag("--explain", qin.explain, "include per-entity kinds and fused scores");

    auto* eval_cmd = app.add_subcommand("eval", "run the evaluation harness");

    auto* serve_cmd = app.add_subcommand("serve", "serve /route and /healthz over HTTP");
    std::string host = "127.0.0.1";
    int port = 8080;
    serve_cmd->add_option("--host", host, "bind address");
    serve_cmd->add_option("--port", port, "bind port");

    auto* convert_cmd =
        app.add_subcommand("convert", "convert LiveMCPBench listings to native schemas");
    std::string servers_in, questions_in, catalog_out = "catalog.json",
                             benchmark_out = "benchmark.json";
    convert_cmd->add_option("--servers", servers_in, "server/tool listing JSON")->required();
    convert_cmd->add_option("--questions", questions_in, "annotated questions JSON");
    convert_cmd->add_option("--out-catalog", catalog_out, "native catalog output path");
    convert_cmd->add_option("--out-benchmark", benchmark_out, "native benchmark output path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (convert_cmd->parsed()) {
            return cmd_convert(servers_in, questions_in, catalog_out, benchmark_out, std::cout);
        }
        RunConfig cfg = effective_config(config_path, o);
        if (index_cmd->parsed()) return cmd_index(cfg, std::cout);
        if (query_cmd->parsed()) {
            if (steps_file) qin.steps_file = *steps_file;
            return cmd_query(cfg, qin, std::cout);
        }
        if (eval_cmd->parsed()) return cmd_eval(cfg, std::cout);
        if (serve_cmd->parsed()) return cmd_serve(cfg, host, port, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    }
    return 0;
}
