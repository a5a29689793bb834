#include "agentroute/convert.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

#include "agentroute/errors.hpp"

namespace agentroute {

namespace {

const nlohmann::json* find_any(const nlohmann::json& obj,
                               std::initializer_list<const char*> keys) {
    if (!obj.is_object()) return nullptr;
    for (const char* key : keys) {
        if (auto it = obj.find(key); it != obj.end()) return &*it;
    }
    return nullptr;
}

std::string string_any(const nlohmann::json& obj, std::initializer_list<const char*> keys,
                       const std::string& locus, const char* what) {
    const auto* v = find_any(obj, keys);
    if (v == nullptr || !v->is_string()) {
        throw ParseError(locus + ": missing " + what);
    }
    return v->get<std::string>();
}

const nlohmann::json& unwrap_array(const nlohmann::json& doc,
                                   std::initializer_list<const char*> wrappers,
                                   const std::string& context) {
    if (doc.is_array()) return doc;
    if (const auto* inner = find_any(doc, wrappers); inner != nullptr && inner->is_array()) {
        return *inner;
    }
    throw ParseError(context + ": expected an array (or a wrapping object)");
}

}  // namespace

nlohmann::json convert_servers(const nlohmann::json& doc, const std::string& context) {
    const auto& servers = unwrap_array(doc, {"servers", "mcp_servers", "agents"}, context);
    nlohmann::json agents = nlohmann::json::array();
    nlohmann::json tools = nlohmann::json::array();
    std::size_t si = 0;
    for (const auto& server : servers) {
        std::string locus = context + ": server[" + std::to_string(si++) + "]";
        const std::string name =
            string_any(server, {"name", "server_name", "server"}, locus, "server name");
        std::string description = name;
        if (const auto* d = find_any(server, {"description", "desc"});
            d != nullptr && d->is_string()) {
            description = d->get<std::string>();
        }
        agents.push_back(nlohmann::json{{"id", name}, {"name", name}, {"description", description}});
        if (const auto* tool_arr = find_any(server, {"tools", "tool_list"});
            tool_arr != nullptr && tool_arr->is_array()) {
            std::size_t ti = 0;
            for (const auto& tool : *tool_arr) {
                std::string tlocus = locus + " tool[" + std::to_string(ti++) + "]";
                const std::string tname =
                    string_any(tool, {"name", "tool_name", "tool"}, tlocus, "tool name");
                std::string tdesc = tname;
                if (const auto* d = find_any(tool, {"description", "desc"});
                    d != nullptr && d->is_string()) {
                    tdesc = d->get<std::string>();
                }
                tools.push_back(nlohmann::json{{"id", name + "." + tname},
                                               {"name", tname},
                                               {"description", tdesc},
                                               {"owner", name}});
            }
        }
    }
    return nlohmann::json{{"agents", std::move(agents)}, {"tools", std::move(tools)}};
}

nlohmann::json convert_questions(const nlohmann::json& doc, const nlohmann::json& catalog_doc,
                                 const std::string& context) {
    std::set<std::string> agent_ids;
    std::set<std::string> tool_ids;
    std::multimap<std::string, std::string> tools_by_name;  // bare name -> id
    std::map<std::string, std::string> tool_owner;
    for (const auto& a : catalog_doc.at("agents")) {
        agent_ids.insert(a.at("id").get<std::string>());
    }
    for (const auto& t : catalog_doc.at("tools")) {
        const auto id = t.at("id").get<std::string>();
        tool_ids.insert(id);
        tools_by_name.emplace(t.at("name").get<std::string>(), id);
        if (t.contains("owner")) tool_owner[id] = t.at("owner").get<std::string>();
    }

    auto resolve_tool = [&](const nlohmann::json& ref, const std::string& locus) -> std::string {
        if (ref.is_object()) {
            const std::string server =
                string_any(ref, {"server", "server_name", "agent"}, locus, "tool's server");
            const std::string tool =
                string_any(ref, {"tool", "tool_name", "name"}, locus, "tool name");
            return server + "." + tool;
        }
        if (!ref.is_string()) throw ParseError(locus + ": tool reference must be string or object");
        const std::string raw = ref.get<std::string>();
        if (tool_ids.count(raw)) return raw;  // already "<server>.<tool>"
        const auto matches = tools_by_name.equal_range(raw);
        if (matches.first == matches.second) {
            throw ParseError(locus + ": unknown tool \"" + raw + "\"");
        }
        if (std::next(matches.first) != matches.second) {
            throw ParseError(locus + ": tool name \"" + raw +
                             "\" is ambiguous; qualify it as \"<server>.<tool>\"");
        }
        return matches.first->second;
    };

    const auto& questions = unwrap_array(doc, {"questions", "data", "items"}, context);
    nlohmann::json out = nlohmann::json::array();
    std::size_t qi = 0;
    for (const auto& q : questions) {
        std::string locus = context + ": question[" + std::to_string(qi) + "]";
        nlohmann::json question;
        if (const auto* id = find_any(q, {"question_id", "id", "qid"});
            id != nullptr && id->is_string()) {
            question["id"] = id->get<std::string>();
        } else {
            question["id"] = "q" + std::to_string(qi + 1);
        }
        question["question"] = string_any(q, {"question", "query", "text"}, locus, "question text");

        const auto* steps = find_any(q, {"steps", "annotated_steps", "step_annotations"});
        if (steps == nullptr || !steps->is_array() || steps->empty()) {
            throw ParseError(locus + ": missing non-empty step annotations");
        }
        nlohmann::json out_steps = nlohmann::json::array();
        int index = 1;
        for (const auto& step : *steps) {
            std::string slocus = locus + " step[" + std::to_string(index) + "]";
            if (!step.is_object()) {
                throw ParseError(slocus +
                                 ": step must be an object carrying relevance annotations");
            }
            nlohmann::json out_step;
            out_step["index"] = index++;
            out_step["text"] = string_any(
                step, {"step", "text", "description", "sub_task", "sub_step"}, slocus, "step text");

            std::set<std::string> relevant_agents;
            std::set<std::string> relevant_tools;
            if (const auto* servers =
                    find_any(step, {"relevant_servers", "servers", "relevant_agents", "agents"});
                servers != nullptr && servers->is_array()) {
                for (const auto& s : *servers) {
                    const auto name = s.get<std::string>();
                    if (!agent_ids.count(name)) {
                        throw ParseError(slocus + ": unknown server \"" + name + "\"");
                    }
                    relevant_agents.insert(name);
                }
            }
            if (const auto* tools = find_any(step, {"relevant_tools", "tools"});
                tools != nullptr && tools->is_array()) {
                for (const auto& t : *tools) {
                    const auto id = resolve_tool(t, slocus);
                    if (!tool_ids.count(id)) {
                        throw ParseError(slocus + ": unknown tool \"" + id + "\"");
                    }
                    relevant_tools.insert(id);
                    if (auto it = tool_owner.find(id); it != tool_owner.end()) {
                        relevant_agents.insert(it->second);
                    }
                }
            }
            if (relevant_agents.empty()) {
                throw ParseError(slocus + ": no relevant servers resolvable for this step");
            }
            out_step["relevant_agents"] = relevant_agents;
            out_step["relevant_tools"] = relevant_tools;
            out_steps.push_back(std::move(out_step));
        }
        question["steps"] = std::move(out_steps);
        out.push_back(std::move(question));
        ++qi;
    }
    return out;
}

}  // namespace agentroute
