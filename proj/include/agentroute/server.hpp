#pragma once

#include <memory>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "agentroute/retrieval.hpp"

namespace httplib {
class Server;
}

namespace agentroute {

/**
 * Read-only routing endpoint over an immutable engine. HTTP-agnostic core;
 * attach_routes wires it onto an httplib server:
 *
 *   GET /route?q=...&k=...  -> query-result JSON (400 on bad params,
 *                              503 while no index is loaded)
 *   GET /healthz            -> index fingerprints (503 while not loaded)
 */
class RouteService {
  public:
    RouteService() = default;  // not loaded

    RouteService(std::shared_ptr<const RetrievalEngine> engine, nlohmann::json fingerprints)
        : engine_(std::move(engine)), fingerprints_(std::move(fingerprints)) {}

    bool loaded() const { return engine_ != nullptr; }

    /// Throws ConfigError for invalid parameters (mapped to 400). When `k`
    /// is absent the engine's configured top_k applies.
    nlohmann::json route(const std::string& q, std::optional<int> k) const;

    nlohmann::json healthz() const;

  private:
    std::shared_ptr<const RetrievalEngine> engine_;
    nlohmann::json fingerprints_;
};

void attach_routes(httplib::Server& server, std::shared_ptr<const RouteService> service);

}  // namespace agentroute
