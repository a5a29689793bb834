#include "agentroute/catalog.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace agentroute {

namespace {

std::string trimmed(std::string_view s) {
    size_t begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return "";
    size_t end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

std::string require_string(const nlohmann::json& obj, const char* key,
                           const std::string& locus) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
        throw ParseError(locus + ": missing or non-string field \"" + key + "\"");
    }
    return it->get<std::string>();
}

void check_nonempty(const std::string& value, const char* field, const std::string& kind,
                    const std::string& id) {
    if (trimmed(value).empty()) {
        throw ValidationError(kind + " \"" + id + "\": empty " + field);
    }
}

std::string expand_template(std::string_view tmpl, std::string_view name,
                            std::string_view description, const nlohmann::json& metadata) {
    std::string out;
    out.reserve(tmpl.size() + name.size() + description.size());
    for (size_t i = 0; i < tmpl.size();) {
        if (tmpl.compare(i, 6, "{name}") == 0) {
            out += name;
            i += 6;
        } else if (tmpl.compare(i, 13, "{description}") == 0) {
            out += description;
            i += 13;
        } else if (tmpl.compare(i, 10, "{metadata}") == 0) {
            if (!metadata.empty()) out += metadata.dump();
            i += 10;
        } else {
            out += tmpl[i];
            ++i;
        }
    }
    return out;
}

}  // namespace

const char* to_string(EntityKind k) {
    return k == EntityKind::agent ? "agent" : "tool";
}

const char* to_string(CorpusScope s) {
    switch (s) {
        case CorpusScope::joint: return "joint";
        case CorpusScope::agents_only: return "agents_only";
        case CorpusScope::tools_only: return "tools_only";
    }
    return "unknown";
}

CorpusScope corpus_scope_from_string(std::string_view s) {
    if (s == "joint") return CorpusScope::joint;
    if (s == "agents_only") return CorpusScope::agents_only;
    if (s == "tools_only") return CorpusScope::tools_only;
    throw ConfigError("unknown corpus scope: \"" + std::string(s) + "\"");
}

std::string entity_text(const AgentRecord& r, std::string_view tmpl) {
    return expand_template(tmpl, r.name, r.description, r.metadata);
}

std::string entity_text(const ToolRecord& r, std::string_view tmpl) {
    return expand_template(tmpl, r.name, r.description, r.metadata);
}

std::string agent_entity_key(std::string_view agent_id) {
    return "agent/" + std::string(agent_id);
}

std::string tool_entity_key(std::string_view tool_id) {
    return "tool/" + std::string(tool_id);
}

Catalog Catalog::from_json(const nlohmann::json& doc, const std::string& context) {
    if (!doc.is_object()) {
        throw ParseError(context + ": top level must be an object with \"agents\" and \"tools\"");
    }
    auto agents_it = doc.find("agents");
    auto tools_it = doc.find("tools");
    if (agents_it == doc.end() || !agents_it->is_array()) {
        throw ParseError(context + ": missing \"agents\" array");
    }
    if (tools_it == doc.end() || !tools_it->is_array()) {
        throw ParseError(context + ": missing \"tools\" array");
    }

    Catalog cat;
    size_t index = 0;
    for (const auto& a : *agents_it) {
        std::string locus = context + ": agents[" + std::to_string(index++) + "]";
        if (!a.is_object()) throw ParseError(locus + ": not an object");
        AgentRecord rec;
        rec.id = require_string(a, "id", locus);
        rec.name = require_string(a, "name", locus);
        rec.description = require_string(a, "description", locus);
        if (auto it = a.find("metadata"); it != a.end()) rec.metadata = *it;
        check_nonempty(rec.name, "name", "agent", rec.id);
        check_nonempty(rec.description, "description", "agent", rec.id);
        if (!cat.agent_ids_.insert(rec.id).second) {
            throw ValidationError("agent \"" + rec.id + "\": duplicate agent id");
        }
        cat.agents_.push_back(std::move(rec));
    }

    index = 0;
    for (const auto& t : *tools_it) {
        std::string locus = context + ": tools[" + std::to_string(index++) + "]";
        if (!t.is_object()) throw ParseError(locus + ": not an object");
        ToolRecord rec;
        rec.id = require_string(t, "id", locus);
        rec.name = require_string(t, "name", locus);
        rec.description = require_string(t, "description", locus);
        if (auto it = t.find("owner"); it != t.end() && !it->is_null()) {
            if (!it->is_string()) throw ParseError(locus + ": \"owner\" must be a string");
            rec.owner_agent_id = it->get<std::string>();
        }
        if (auto it = t.find("metadata"); it != t.end()) rec.metadata = *it;
        check_nonempty(rec.name, "name", "tool", rec.id);
        check_nonempty(rec.description, "description", "tool", rec.id);
        if (!cat.tool_ids_.insert(rec.id).second) {
            throw ValidationError("tool \"" + rec.id + "\": duplicate tool id");
        }
        if (rec.owner_agent_id && cat.agent_ids_.count(*rec.owner_agent_id) == 0) {
            throw ValidationError("tool \"" + rec.id + "\": owner \"" + *rec.owner_agent_id +
                                  "\" does not reference an agent");
        }
        if (rec.owner_agent_id) {
            cat.owner_map_.emplace(rec.id, *rec.owner_agent_id);
        }
        cat.tools_.push_back(std::move(rec));
    }
    return cat;
}

Catalog Catalog::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open catalog file: " + path.string());
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return from_json(doc, path.string());
}

bool Catalog::has_agent(std::string_view agent_id) const {
    return agent_ids_.count(std::string(agent_id)) != 0;
}

bool Catalog::has_tool(std::string_view tool_id) const {
    return tool_ids_.count(std::string(tool_id)) != 0;
}

nlohmann::json Catalog::to_json() const {
    nlohmann::json agents = nlohmann::json::array();
    for (const auto& a : agents_) {
        nlohmann::json obj = {{"id", a.id}, {"name", a.name}, {"description", a.description}};
        if (!a.metadata.empty()) obj["metadata"] = a.metadata;
        agents.push_back(std::move(obj));
    }
    nlohmann::json tools = nlohmann::json::array();
    for (const auto& t : tools_) {
        nlohmann::json obj = {{"id", t.id}, {"name", t.name}, {"description", t.description}};
        if (t.owner_agent_id) obj["owner"] = *t.owner_agent_id;
        if (!t.metadata.empty()) obj["metadata"] = t.metadata;
        tools.push_back(std::move(obj));
    }
    return nlohmann::json{{"agents", std::move(agents)}, {"tools", std::move(tools)}};
}

void Catalog::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) {
        throw IoError("cannot write catalog file: " + path.string());
    }
    out << to_json().dump(2) << "\n";
}

Catalog load_catalog(const std::filesystem::path& path) {
    return Catalog::from_json_file(path);
}

std::vector<CatalogEntity> to_entities(const Catalog& catalog, CorpusScope scope,
                                       std::string_view text_template) {
    std::vector<CatalogEntity> out;
    const bool want_agents = scope != CorpusScope::tools_only;
    const bool want_tools = scope != CorpusScope::agents_only;
    if (want_agents) {
        for (const auto& a : catalog.agents()) {
            out.push_back(CatalogEntity{EntityKind::agent, agent_entity_key(a.id), a.id,
                                        entity_text(a, text_template), std::nullopt});
        }
    }
    if (want_tools) {
        for (const auto& t : catalog.tools()) {
            out.push_back(CatalogEntity{EntityKind::tool, tool_entity_key(t.id), t.id,
                                        entity_text(t, text_template), t.owner_agent_id});
        }
    }
    return out;
}

std::optional<std::string> owner_of(const Catalog& catalog, const CatalogEntity& entity) {
    if (entity.kind == EntityKind::agent) {
        if (!catalog.has_agent(entity.record_id)) {
            throw UnknownEntity("agent \"" + entity.record_id + "\" not in catalog");
        }
        return entity.record_id;
    }
    if (!catalog.has_tool(entity.record_id)) {
        throw UnknownEntity("tool \"" + entity.record_id + "\" not in catalog");
    }
    auto it = catalog.owner_map().find(entity.record_id);
    if (it == catalog.owner_map().end()) return std::nullopt;
    return it->second;
}

}  // namespace agentroute
