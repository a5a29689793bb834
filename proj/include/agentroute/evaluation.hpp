#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "agentroute/retrieval.hpp"

namespace agentroute {

struct BenchmarkStep {
    int index = 1;
    std::string text;
    std::set<std::string> relevant_agents;  // non-empty, validated against the catalog
    std::set<std::string> relevant_tools;   // retained for ablations, unused in headline metrics
};

struct BenchmarkQuestion {
    std::string id;
    std::string text;
    std::vector<BenchmarkStep> steps;
};

struct BenchmarkStats {
    std::size_t question_count = 0;
    std::size_t step_count = 0;
    double avg_steps_per_question = 0.0;
    double avg_relevant_agents_per_question = 0.0;  // distinct agents per question
    double avg_relevant_tools_per_question = 0.0;
};

/// Load and validate the benchmark file (JSON array of
/// {id, question, steps:[{index, text, relevant_agents, relevant_tools}]}).
/// Throws ParseError on shape problems and DanglingReference when a relevant
/// id is absent from the catalog, naming the question and step.
std::vector<BenchmarkQuestion> load_benchmark(const std::filesystem::path& path,
                                              const Catalog& catalog);

BenchmarkStats benchmark_stats(const std::vector<BenchmarkQuestion>& questions);

/// A retrieval method under evaluation: a corpus scope plus a fusion mode.
struct MethodSpec {
    std::string name;
    CorpusScope scope = CorpusScope::joint;
    FusionMode fusion = FusionMode::rrf;
};

/// The default roster: the joint fused method, the agent-only fused
/// baseline, and BM25-only over both corpora (the lexical baseline's corpus
/// choice is ambiguous, so both are reported).
std::vector<MethodSpec> default_methods();

struct KMetrics {
    double recall = 0.0;
    double map = 0.0;
    double ndcg = 0.0;
};

struct MetricReport {
    std::string method_name;
    std::string embedding_model;
    std::map<int, KMetrics> per_k;
    std::size_t step_count = 0;
    // Share of walked top-K supporting entities (at the headline K) that are
    // agent-corpus entries, and, among walked entities whose mapped agent was
    // relevant, the share that were tools reaching the agent via the owner
    // link.
    double agent_corpus_share_topk = 0.0;
    double matched_tools_tracing_to_agents_share = 0.0;
    std::string error;  // non-empty when the method aborted
};

/// One evaluated step: everything needed to recompute metrics post hoc.
struct StepOutcome {
    std::string question_id;
    int step_index = 1;
    std::string method;
    std::string model;
    std::vector<std::string> retrieved_agents;       // at the deepest K
    std::set<std::string> relevant_agents;
    std::vector<std::string> supporting_kinds;       // walk order, headline K
    std::vector<bool> supporting_matched;            // parallel: mapped agent relevant
    std::vector<bool> supporting_is_tool;            // parallel: entity kind == tool
};

nlohmann::json step_log_record(const StepOutcome& o);

/// Macro-average per-step metrics into a report. Pure fold; independent of
/// evaluation order.
MetricReport aggregate_outcomes(const std::string& method, const std::string& model,
                                const std::vector<StepOutcome>& outcomes,
                                const std::vector<int>& ks);

struct EvaluationOptions {
    Bm25Params bm25;
    RetrievalConfig retrieval;
    std::vector<int> ks = {1, 3, 5, 10};
    QueryMode query_mode = QueryMode::step_wise;
    std::filesystem::path cache_dir;
    std::string text_template = std::string(kDefaultTextTemplate);
};

struct EvaluationRun {
    std::vector<MetricReport> reports;
    std::vector<StepOutcome> outcomes;
    // Per-question micro averages (question -> mean over its steps) at the
    // headline K, logged alongside the macro numbers.
    nlohmann::json per_question = nlohmann::json::array();
};

/// Evaluate every method against every provider. A method that throws is
/// recorded in its report and the run continues. Deterministic given cached
/// embeddings. When `step_log` is non-null, per-step records are appended as
/// JSON lines.
EvaluationRun run_evaluation(const Catalog& catalog,
                             const std::vector<BenchmarkQuestion>& benchmark,
                             const std::vector<MethodSpec>& methods,
                             const std::vector<EmbeddingProviderSpec>& providers,
                             const EvaluationOptions& options, std::ostream* step_log = nullptr);

enum class ReportFormat { json, csv, markdown_table };

/// Render reports with stable column order (method, model, K, recall, map,
/// ndcg, shares). `run_metadata` is embedded so any artifact names the
/// config hash, seed, provider fingerprints, and fusion settings that
/// produced it.
std::string render_report(const std::vector<MetricReport>& reports, ReportFormat format,
                          const nlohmann::json& run_metadata);

void emit_report(const std::vector<MetricReport>& reports, ReportFormat format,
                 const std::filesystem::path& path, const nlohmann::json& run_metadata);

/// Reconstruct MetricReports from a JSON report file (round-trip support).
std::vector<MetricReport> parse_report_json(const nlohmann::json& doc);

/// Per-method mean and standard deviation across embedding models at one
/// cutoff (population std-dev; 0 for a single model). Failed reports are
/// excluded.
nlohmann::json across_model_summary(const std::vector<MetricReport>& reports, int k);

}  // namespace agentroute
