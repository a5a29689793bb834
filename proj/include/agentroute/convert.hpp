#pragma once

#include <nlohmann/json.hpp>

namespace agentroute {

// Converters from the LiveMCPBench publication format into the native
// catalog/benchmark schemas. Key names in the source files vary between
// releases, so a few aliases are accepted for each field; see README for the
// exact mapping. Agent ids are the server names; tool ids are
// "<server>.<tool>".

/// Server listing -> native catalog JSON ({"agents": [...], "tools": [...]}).
nlohmann::json convert_servers(const nlohmann::json& doc, const std::string& context);

/// Annotated questions -> native benchmark JSON array. `servers_doc` is the
/// converted catalog, used to resolve tool references to owners.
nlohmann::json convert_questions(const nlohmann::json& doc, const nlohmann::json& catalog_doc,
                                 const std::string& context);

}  // namespace agentroute
