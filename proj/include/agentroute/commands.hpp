#pragma once

#include <optional>
#include <ostream>

#include "agentroute/config.hpp"

namespace agentroute {

// Subcommand entry points. Each returns the process exit code (0 on
// success); domain errors escape as exceptions and main maps them onto the
// documented codes (1=config, 2=data, 3=provider).

struct QueryInput {
    std::optional<std::string> direct_text;
    std::optional<std::filesystem::path> steps_file;
    std::string question_id = "cli";
    std::optional<int> k;
    bool explain = false;
};

/// Build and persist the lexical+dense index bundle for every configured
/// scope and provider. Prints the corpus counts.
int cmd_index(const RunConfig& config, std::ostream& out);

/// Retrieve agents for a direct query or a steps file against the persisted
/// bundle; prints the query-result JSON.
int cmd_query(const RunConfig& config, const QueryInput& input, std::ostream& out);

/// Run every configured method x provider over the benchmark; writes
/// report.{json,csv,md}, per_question.json and steps.jsonl under output_dir
/// and prints the markdown table.
int cmd_eval(const RunConfig& config, std::ostream& out);

/// Serve GET /route and GET /healthz over the persisted bundle. Blocks.
int cmd_serve(const RunConfig& config, const std::string& host, int port, std::ostream& out);

/// Convert LiveMCPBench-format server/question listings into the native
/// catalog and benchmark schemas.
int cmd_convert(const std::filesystem::path& servers_path,
                const std::filesystem::path& questions_path,
                const std::filesystem::path& out_catalog,
                const std::filesystem::path& out_benchmark, std::ostream& out);

/// Exit-code mapping used by main (and by tests).
int exit_code_for(const std::exception& e);

}  // namespace agentroute
