#include "agentroute/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "agentroute/metrics.hpp"

namespace agentroute {

namespace {

std::set<std::string> string_set(const nlohmann::json& arr, const std::string& locus) {
    if (!arr.is_array()) throw ParseError(locus + ": expected an array of ids");
    std::set<std::string> out;
    for (const auto& v : arr) {
        if (!v.is_string()) throw ParseError(locus + ": ids must be strings");
        out.insert(v.get<std::string>());
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::vector<BenchmarkQuestion> load_benchmark(const std::filesystem::path& path,
                                              const Catalog& catalog) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open benchmark file: " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (!doc.is_array()) throw ParseError(path.string() + ": top level must be an array");

    std::vector<BenchmarkQuestion> questions;
    std::size_t qi = 0;
    for (const auto& q : doc) {
        std::string locus = path.string() + ": question[" + std::to_string(qi++) + "]";
        if (!q.is_object()) throw ParseError(locus + ": not an object");
        BenchmarkQuestion question;
        if (auto it = q.find("id"); it != q.end() && it->is_string()) {
            question.id = it->get<std::string>();
        } else {
            throw ParseError(locus + ": missing \"id\"");
        }
        if (auto it = q.find("question"); it != q.end() && it->is_string()) {
            question.text = it->get<std::string>();
        } else {
            throw ParseError(locus + " (\"" + question.id + "\"): missing \"question\"");
        }
        auto steps_it = q.find("steps");
        if (steps_it == q.end() || !steps_it->is_array() || steps_it->empty()) {
            throw ParseError(locus + " (\"" + question.id + "\"): missing non-empty \"steps\"");
        }
        int expected_index = 1;
        for (const auto& s : *steps_it) {
            std::string slocus = "question \"" + question.id + "\" step " +
                                 std::to_string(expected_index);
            if (!s.is_object()) throw ParseError(slocus + ": not an object");
            BenchmarkStep step;
            step.index = s.value("index", 0);
            if (step.index != expected_index) {
                throw ParseError(slocus + ": step indexes must be contiguous from 1");
            }
            ++expected_index;
            if (auto it = s.find("text"); it != s.end() && it->is_string()) {
                step.text = it->get<std::string>();
            } else {
                throw ParseError(slocus + ": missing \"text\"");
            }
            step.relevant_agents = string_set(s.value("relevant_agents", nlohmann::json::array()),
                                              slocus + " relevant_agents");
            step.relevant_tools = string_set(s.value("relevant_tools", nlohmann::json::array()),
                                             slocus + " relevant_tools");
            if (step.relevant_agents.empty()) {
                throw ParseError(slocus + ": relevant_agents must be non-empty");
            }
            for (const auto& id : step.relevant_agents) {
                if (!catalog.has_agent(id)) {
                    throw DanglingReference(slocus + ": relevant agent \"" + id +
                                            "\" not in catalog");
                }
            }
            for (const auto& id : step.relevant_tools) {
                if (!catalog.has_tool(id)) {
                    throw DanglingReference(slocus + ": relevant tool \"" + id +
                                            "\" not in catalog");
                }
            }
            question.steps.push_back(std::move(step));
        }
        questions.push_back(std::move(question));
    }
    return questions;
}

BenchmarkStats benchmark_stats(const std::vector<BenchmarkQuestion>& questions) {
    BenchmarkStats stats;
    stats.question_count = questions.size();
    if (questions.empty()) return stats;
    std::size_t agents_total = 0;
    std::size_t tools_total = 0;
    for (const auto& q : questions) {
        stats.step_count += q.steps.size();
        std::set<std::string> agents, tools;
        for (const auto& s : q.steps) {
            agents.insert(s.relevant_agents.begin(), s.relevant_agents.end());
            tools.insert(s.relevant_tools.begin(), s.relevant_tools.end());
        }
        agents_total += agents.size();
        tools_total += tools.size();
    }
    const auto n = static_cast<double>(questions.size());
    stats.avg_steps_per_question = static_cast<double>(stats.step_count) / n;
    stats.avg_relevant_agents_per_question = static_cast<double>(agents_total) / n;
    stats.avg_relevant_tools_per_question = static_cast<double>(tools_total) / n;
    return stats;
}

std::vector<MethodSpec> default_methods() {
    return {
        {"joint", CorpusScope::joint, FusionMode::rrf},
        {"agent_only", CorpusScope::agents_only, FusionMode::rrf},
        {"bm25_joint", CorpusScope::joint, FusionMode::lexical_only},
        {"bm25_agent_only", CorpusScope::agents_only, FusionMode::lexical_only},
    };
}

nlohmann::json step_log_record(const StepOutcome& o) {
    return nlohmann::json{{"question_id", o.question_id}, {"step_index", o.step_index},
                          {"method", o.method},           {"model", o.model},
                          {"retrieved_agents", o.retrieved_agents},
                          {"supporting_kinds", o.supporting_kinds}};
}

MetricReport aggregate_outcomes(const std::string& method, const std::string& model,
                                const std::vector<StepOutcome>& outcomes,
                                const std::vector<int>& ks) {
    MetricReport report;
    report.method_name = method;
    report.embedding_model = model;
    report.step_count = outcomes.size();
    if (outcomes.empty()) return report;

    for (int k : ks) {
        KMetrics m;
        for (const auto& o : outcomes) {
            m.recall += recall_at_k(o.retrieved_agents, o.relevant_agents, k);
            m.map += ap_at_k(o.retrieved_agents, o.relevant_agents, k);
            m.ndcg += ndcg_at_k(o.retrieved_agents, o.relevant_agents, k);
        }
        const auto n = static_cast<double>(outcomes.size());
        report.per_k[k] = KMetrics{m.recall / n, m.map / n, m.ndcg / n};
    }

    std::size_t walked = 0, walked_agents = 0, matched = 0, matched_tools = 0;
    for (const auto& o : outcomes) {
        for (std::size_t i = 0; i < o.supporting_kinds.size(); ++i) {
            ++walked;
            if (o.supporting_kinds[i] == "agent") ++walked_agents;
            if (o.supporting_matched[i]) {
                ++matched;
                if (o.supporting_is_tool[i]) ++matched_tools;
            }
        }
    }
    report.agent_corpus_share_topk =
        walked ? static_cast<double>(walked_agents) / static_cast<double>(walked) : 0.0;
    report.matched_tools_tracing_to_agents_share =
        matched ? static_cast<double>(matched_tools) / static_cast<double>(matched) : 0.0;
    return report;
}

namespace {

// Flatten one selection walk into outcome bookkeeping: kinds in walk order,
// whether each walked entity's mapped agent was relevant, and whether it was
// a tool reaching the agent through the owner link.
void record_walk(const AgentSelection& sel, const std::set<std::string>& relevant,
                 StepOutcome& out) {
    // supporting_entities is keyed by agent; replay in walk order is not
    // required for the share statistics, so iterate agents in selection
    // order for determinism.
    for (const auto& agent : sel.agents) {
        auto it = sel.supporting_entities.find(agent);
        if (it == sel.supporting_entities.end()) continue;
        const bool agent_relevant = relevant.count(agent) != 0;
        for (const auto& key : it->second) {
            const bool is_tool = key.rfind("tool/", 0) == 0;
            out.supporting_kinds.push_back(is_tool ? "tool" : "agent");
            out.supporting_matched.push_back(agent_relevant);
            out.supporting_is_tool.push_back(is_tool);
        }
    }
}

}  // namespace

EvaluationRun run_evaluation(const Catalog& catalog,
                             const std::vector<BenchmarkQuestion>& benchmark,
                             const std::vector<MethodSpec>& methods,
                             const std::vector<EmbeddingProviderSpec>& providers,
                             const EvaluationOptions& options, std::ostream* step_log) {
    EvaluationRun run;
    const int deepest_k =
        options.ks.empty() ? options.retrieval.top_k
                           : std::max(options.retrieval.top_k,
                                      *std::max_element(options.ks.begin(), options.ks.end()));

    for (const auto& provider : providers) {
        for (const auto& method : methods) {
            MetricReport report;
            report.method_name = method.name;
            report.embedding_model = provider.model_name;
            try {
                RetrievalConfig config = options.retrieval;
                config.fusion = method.fusion;
                config.scope = method.scope;
                RetrievalEngine engine(catalog, method.scope, options.bm25, provider,
                                       options.cache_dir, config, options.text_template);

                std::vector<StepOutcome> outcomes;
                for (const auto& question : benchmark) {
                    std::vector<std::pair<int, const BenchmarkStep*>> work;
                    if (options.query_mode == QueryMode::step_wise) {
                        for (const auto& step : question.steps) work.emplace_back(step.index, &step);
                    } else {
                        work.emplace_back(1, nullptr);  // direct: one query per question
                    }
                    for (auto [index, step] : work) {
                        StepOutcome o;
                        o.question_id = question.id;
                        o.step_index = index;
                        o.method = method.name;
                        o.model = provider.model_name;
                        std::string query_text;
                        if (step != nullptr) {
                            query_text = step->text;
                            o.relevant_agents = step->relevant_agents;
                        } else {
                            query_text = question.text;
                            for (const auto& s : question.steps) {
                                o.relevant_agents.insert(s.relevant_agents.begin(),
                                                         s.relevant_agents.end());
                            }
                        }
                        RankedList candidates = engine.top_n(query_text);
                        o.retrieved_agents =
                            select_agents(candidates, catalog, deepest_k).agents;
                        auto headline = select_agents(candidates, catalog, config.top_k);
                        record_walk(headline, o.relevant_agents, o);
                        outcomes.push_back(std::move(o));
                    }
                }
                report = aggregate_outcomes(method.name, provider.model_name, outcomes,
                                            options.ks);

                // Per-question micro averages at the headline K.
                std::size_t cursor = 0;
                for (const auto& question : benchmark) {
                    const std::size_t steps_here =
                        options.query_mode == QueryMode::step_wise ? question.steps.size() : 1;
                    double recall = 0, map = 0, ndcg = 0;
                    for (std::size_t s = 0; s < steps_here; ++s) {
                        const auto& o = outcomes[cursor + s];
                        recall += recall_at_k(o.retrieved_agents, o.relevant_agents,
                                              options.retrieval.top_k);
                        map += ap_at_k(o.retrieved_agents, o.relevant_agents,
                                       options.retrieval.top_k);
                        ndcg += ndcg_at_k(o.retrieved_agents, o.relevant_agents,
                                          options.retrieval.top_k);
                    }
                    const auto n = static_cast<double>(steps_here);
                    run.per_question.push_back(nlohmann::json{
                        {"method", method.name},
                        {"model", provider.model_name},
                        {"question_id", question.id},
                        {"k", options.retrieval.top_k},
                        {"recall", recall / n},
                        {"map", map / n},
                        {"ndcg", ndcg / n}});
                    cursor += steps_here;
                }

                if (step_log != nullptr) {
                    for (const auto& o : outcomes) {
                        *step_log << step_log_record(o).dump() << "\n";
                    }
                }
                run.outcomes.insert(run.outcomes.end(), outcomes.begin(), outcomes.end());
            } catch (const Error& e) {
                report.error = e.what();
            }
            run.reports.push_back(std::move(report));
        }
    }
    return run;
}

std::string render_report(const std::vector<MetricReport>& reports, ReportFormat format,
                          const nlohmann::json& run_metadata) {
    if (format == ReportFormat::json) {
        nlohmann::json out;
        out["run_metadata"] = run_metadata;
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& r : reports) {
            nlohmann::json per_k = nlohmann::json::object();
            for (const auto& [k, m] : r.per_k) {
                per_k[std::to_string(k)] = {{"recall", m.recall}, {"map", m.map}, {"ndcg", m.ndcg}};
            }
            nlohmann::json obj{
                {"method", r.method_name},
                {"model", r.embedding_model},
                {"per_k", std::move(per_k)},
                {"step_count", r.step_count},
                {"agent_corpus_share_topk", r.agent_corpus_share_topk},
                {"matched_tools_tracing_to_agents_share", r.matched_tools_tracing_to_agents_share}};
            if (!r.error.empty()) obj["error"] = r.error;
            arr.push_back(std::move(obj));
        }
        out["reports"] = std::move(arr);
        return out.dump(2) + "\n";
    }

    if (format == ReportFormat::csv) {
        std::string out = "# run_metadata " + run_metadata.dump() + "\n";
        out += "method,model,k,recall,map,ndcg,agent_corpus_share_topk,matched_tools_tracing_to_"
               "agents_share\n";
        for (const auto& r : reports) {
            for (const auto& [k, m] : r.per_k) {
                out += r.method_name + "," + r.embedding_model + "," + std::to_string(k) + "," +
                       fmt(m.recall) + "," + fmt(m.map) + "," + fmt(m.ndcg) + "," +
                       fmt(r.agent_corpus_share_topk) + "," +
                       fmt(r.matched_tools_tracing_to_agents_share) + "\n";
            }
            if (!r.error.empty()) {
                out += "# method " + r.method_name + " failed: " + r.error + "\n";
            }
        }
        return out;
    }

    // markdown_table: grouped Recall | mAP | nDCG header for eyeball
    // comparison against published results tables.
    std::vector<int> ks;
    for (const auto& r : reports) {
        for (const auto& [k, m] : r.per_k) {
            (void)m;
            if (std::find(ks.begin(), ks.end(), k) == ks.end()) ks.push_back(k);
        }
    }
    std::sort(ks.begin(), ks.end());

    std::string out;
    out += "| Approach | Model |";
    out += " Recall";
    for (std::size_t i = 1; i < ks.size(); ++i) out += " |";
    out += " | mAP";
    for (std::size_t i = 1; i < ks.size(); ++i) out += " |";
    out += " | nDCG";
    for (std::size_t i = 1; i < ks.size(); ++i) out += " |";
    out += " | Agent share | Tool-traced share |\n";
    out += "| | |";
    for (int rep = 0; rep < 3; ++rep) {
        for (int k : ks) out += " @" + std::to_string(k) + " |";
    }
    out += " | |\n";
    for (const auto& r : reports) {
        out += "| " + r.method_name + " | " + r.embedding_model + " |";
        for (int part = 0; part < 3; ++part) {
            for (int k : ks) {
                auto it = r.per_k.find(k);
                if (it == r.per_k.end()) {
                    out += " - |";
                    continue;
                }
                const double v = part == 0   ? it->second.recall
                                 : part == 1 ? it->second.map
                                             : it->second.ndcg;
                char buf[16];
                std::snprintf(buf, sizeof(buf), " %.2f |", v);
                out += buf;
            }
        }
        char buf[40];
        std::snprintf(buf, sizeof(buf), " %.4f | %.4f |", r.agent_corpus_share_topk,
                      r.matched_tools_tracing_to_agents_share);
        out += buf;
        if (!r.error.empty()) out += " FAILED: " + r.error;
        out += "\n";
    }
    out += "\nrun_metadata: " + run_metadata.dump() + "\n";
    return out;
}

void emit_report(const std::vector<MetricReport>& reports, ReportFormat format,
                 const std::filesystem::path& path, const nlohmann::json& run_metadata) {
    if (reports.empty()) throw ConfigError("emit_report requires at least one report");
    std::ofstream out(path);
    if (!out) throw IoError("cannot write report: " + path.string());
    out << render_report(reports, format, run_metadata);
}

nlohmann::json across_model_summary(const std::vector<MetricReport>& reports, int k) {
    // Preserve first-appearance method order.
    std::vector<std::string> order;
    std::map<std::string, std::vector<const MetricReport*>> by_method;
    for (const auto& r : reports) {
        if (!r.error.empty() || !r.per_k.count(k)) continue;
        if (!by_method.count(r.method_name)) order.push_back(r.method_name);
        by_method[r.method_name].push_back(&r);
    }

    auto mean_std = [](const std::vector<double>& xs) {
        double mean = 0.0;
        for (double x : xs) mean += x;
        mean /= static_cast<double>(xs.size());
        double var = 0.0;
        for (double x : xs) var += (x - mean) * (x - mean);
        var /= static_cast<double>(xs.size());
        return std::pair<double, double>{mean, std::sqrt(var)};
    };

    nlohmann::json out = nlohmann::json::array();
    for (const auto& method : order) {
        std::vector<double> recalls, ndcgs, maps;
        for (const auto* r : by_method[method]) {
            recalls.push_back(r->per_k.at(k).recall);
            ndcgs.push_back(r->per_k.at(k).ndcg);
            maps.push_back(r->per_k.at(k).map);
        }
        auto [r_mean, r_std] = mean_std(recalls);
        auto [n_mean, n_std] = mean_std(ndcgs);
        auto [m_mean, m_std] = mean_std(maps);
        out.push_back(nlohmann::json{{"method", method},
                                     {"k", k},
                                     {"models", recalls.size()},
                                     {"recall_mean", r_mean},
                                     {"recall_std", r_std},
                                     {"map_mean", m_mean},
                                     {"map_std", m_std},
                                     {"ndcg_mean", n_mean},
                                     {"ndcg_std", n_std}});
    }
    return out;
}

std::vector<MetricReport> parse_report_json(const nlohmann::json& doc) {
    std::vector<MetricReport> reports;
    for (const auto& obj : doc.at("reports")) {
        MetricReport r;
        r.method_name = obj.at("method").get<std::string>();
        r.embedding_model = obj.at("model").get<std::string>();
        r.step_count = obj.at("step_count").get<std::size_t>();
        r.agent_corpus_share_topk = obj.at("agent_corpus_share_topk").get<double>();
        r.matched_tools_tracing_to_agents_share =
            obj.at("matched_tools_tracing_to_agents_share").get<double>();
        if (obj.contains("error")) r.error = obj.at("error").get<std::string>();
        for (const auto& [key, m] : obj.at("per_k").items()) {
            r.per_k[std::stoi(key)] = KMetrics{m.at("recall").get<double>(),
                                               m.at("map").get<double>(),
                                               m.at("ndcg").get<double>()};
        }
        reports.push_back(std::move(r));
    }
    return reports;
}

}  // namespace agentroute
