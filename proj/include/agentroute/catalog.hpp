#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "agentroute/errors.hpp"

namespace agentroute {

enum class EntityKind { agent, tool };
enum class CorpusScope { joint, agents_only, tools_only };

const char* to_string(EntityKind k);
const char* to_string(CorpusScope s);
CorpusScope corpus_scope_from_string(std::string_view s);

/// An agent (MCP server): a bundle of tools behind one interface.
struct AgentRecord {
    std::string id;
    std::string name;
    std::string description;
    nlohmann::json metadata = nlohmann::json::object();  // opaque, round-tripped
};

/// A single callable capability. `owner_agent_id` links it to its parent
/// agent; it may be absent when the source catalog lacks the metadata.
struct ToolRecord {
    std::string id;
    std::string name;
    std::string description;
    std::optional<std::string> owner_agent_id;
    nlohmann::json metadata = nlohmann::json::object();
};

/// One retrievable unit of the unified corpus. `id` is the internal key,
/// prefixed "agent/" or "tool/" so the two id namespaces can never collide
/// and the kind of a ranked item is always unambiguous.
struct CatalogEntity {
    EntityKind kind;
    std::string id;         // prefixed key, unique across the whole catalog
    std::string record_id;  // user-supplied id of the source record
    std::string text;       // cached entity_text of the source record
    std::optional<std::string> owner_agent_id;  // tools only
};

// Default indexable-text template. `{name}`, `{description}`, and
// `{metadata}` (compact JSON, empty when the record carries none) expand to
// the record fields; anything else is copied verbatim. The default indexes
// names and descriptions only; ablations can opt metadata (e.g. parameter
// schemas) in through this knob.
inline constexpr std::string_view kDefaultTextTemplate = "{name}: {description}";

std::string entity_text(const AgentRecord& r, std::string_view tmpl = kDefaultTextTemplate);
std::string entity_text(const ToolRecord& r, std::string_view tmpl = kDefaultTextTemplate);

std::string agent_entity_key(std::string_view agent_id);
std::string tool_entity_key(std::string_view tool_id);

/**
 * Tool-agent catalog as a bipartite ownership graph. Immutable after load;
 * safe for unlimited concurrent readers.
 *
 * Validation guarantees: unique agent ids, unique tool ids, non-empty
 * (after trimming) names and descriptions, and every present owner
 * reference resolving to an agent.
 */
class Catalog {
  public:
    static Catalog from_json(const nlohmann::json& doc, const std::string& context);
    static Catalog from_json_file(const std::filesystem::path& path);

    const std::vector<AgentRecord>& agents() const { return agents_; }
    const std::vector<ToolRecord>& tools() const { return tools_; }

    /// tool_id -> agent_id, exactly the tools with a present owner.
    const std::map<std::string, std::string>& owner_map() const { return owner_map_; }

    bool has_agent(std::string_view agent_id) const;
    bool has_tool(std::string_view tool_id) const;

    /// Inverse of from_json; loading the result yields an identical catalog.
    nlohmann::json to_json() const;
    void save(const std::filesystem::path& path) const;

  private:
    std::vector<AgentRecord> agents_;
    std::vector<ToolRecord> tools_;
    std::map<std::string, std::string> owner_map_;
    std::set<std::string> agent_ids_;
    std::set<std::string> tool_ids_;
};

Catalog load_catalog(const std::filesystem::path& path);

/// Flatten the catalog into the entity list for one corpus scope: agents in
/// input order, then tools in input order. Entity ordinals used everywhere
/// downstream are positions in this list.
std::vector<CatalogEntity> to_entities(const Catalog& catalog, CorpusScope scope,
                                       std::string_view text_template = kDefaultTextTemplate);

/// Owner resolution per the selection algorithm: an agent entity maps to its
/// own id, a tool entity to its owner (possibly absent). Throws UnknownEntity
/// if the entity's record id is not in the catalog.
std::optional<std::string> owner_of(const Catalog& catalog, const CatalogEntity& entity);

}  // namespace agentroute
