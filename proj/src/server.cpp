#include "agentroute/server.hpp"

#include <httplib.h>

namespace agentroute {

nlohmann::json RouteService::route(const std::string& q, std::optional<int> k) const {
    if (q.empty()) throw ConfigError("query parameter \"q\" must be non-empty");
    const int effective_k = k.value_or(engine_->config().top_k);
    if (effective_k < 1) throw ConfigError("parameter \"k\" must be a positive integer");

    auto query = QuerySpec::direct("adhoc", q);
    RankedList candidates = engine_->top_n(q);
    auto selection = select_agents(candidates, engine_->catalog(), effective_k);
    return query_result_json(query, {selection}, {candidates}, /*include_explanation=*/false);
}

nlohmann::json RouteService::healthz() const {
    nlohmann::json out = fingerprints_;
    out["status"] = "ok";
    return out;
}

void attach_routes(httplib::Server& server, std::shared_ptr<const RouteService> service) {
    server.Get("/route", [service](const httplib::Request& req, httplib::Response& res) {
        if (!service->loaded()) {
            res.status = 503;
            res.set_content(R"({"error":"index not loaded"})", "application/json");
            return;
        }
        const std::string q = req.get_param_value("q");
        int k = 0;
        if (req.has_param("k")) {
            try {
                std::size_t consumed = 0;
                const std::string raw = req.get_param_value("k");
                k = std::stoi(raw, &consumed);
                if (consumed != raw.size()) throw std::invalid_argument(raw);
            } catch (const std::exception&) {
                res.status = 400;
                res.set_content(R"({"error":"parameter \"k\" must be a positive integer"})",
                                "application/json");
                return;
            }
        }
        try {
            auto body = service->route(q, req.has_param("k") ? std::optional<int>(k) : std::nullopt);
            res.set_content(body.dump(), "application/json");
        } catch (const ConfigError& e) {
            res.status = 400;
            res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
        } catch (const Error& e) {
            res.status = 500;
            res.set_content(nlohmann::json{{"error", e.what()}}.dump(), "application/json");
        }
    });

    server.Get("/healthz", [service](const httplib::Request&, httplib::Response& res) {
        if (!service->loaded()) {
            res.status = 503;
            res.set_content(R"({"error":"index not loaded"})", "application/json");
            return;
        }
        res.set_content(service->healthz().dump(), "application/json");
    });
}

}  // namespace agentroute
