#include "agentroute/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "agentroute/errors.hpp"

namespace agentroute {

namespace {

void check_args(const std::set<std::string>& relevant, int k) {
    if (relevant.empty()) throw EmptyRelevantSet("metric requires a non-empty relevant set");
    if (k < 1) throw std::invalid_argument("metric cutoff k must be >= 1");
}

}  // namespace

double recall_at_k(std::span<const std::string> retrieved, const std::set<std::string>& relevant,
                   int k) {
    check_args(relevant, k);
    const std::size_t cutoff = std::min(retrieved.size(), static_cast<std::size_t>(k));
    std::set<std::string> hit;
    for (std::size_t i = 0; i < cutoff; ++i) {
        if (relevant.count(retrieved[i])) hit.insert(retrieved[i]);
    }
    return static_cast<double>(hit.size()) / static_cast<double>(relevant.size());
}

double ap_at_k(std::span<const std::string> retrieved, const std::set<std::string>& relevant,
               int k) {
    check_args(relevant, k);
    const std::size_t cutoff = std::min(retrieved.size(), static_cast<std::size_t>(k));
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < cutoff; ++i) {
        if (relevant.count(retrieved[i])) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);  // precision@i
        }
    }
    const auto norm = std::min(static_cast<std::size_t>(k), relevant.size());
    return sum / static_cast<double>(norm);
}

double ndcg_at_k(std::span<const std::string> retrieved, const std::set<std::string>& relevant,
                 int k) {
    check_args(relevant, k);
    const std::size_t cutoff = std::min(retrieved.size(), static_cast<std::size_t>(k));
    double dcg = 0.0;
    for (std::size_t i = 0; i < cutoff; ++i) {
        if (relevant.count(retrieved[i])) {
            dcg += 1.0 / std::log2(static_cast<double>(i + 2));
        }
    }
    const auto ideal_hits = std::min(static_cast<std::size_t>(k), relevant.size());
    double idcg = 0.0;
    for (std::size_t i = 0; i < ideal_hits; ++i) {
        idcg += 1.0 / std::log2(static_cast<double>(i + 2));
    }
    return dcg / idcg;
}

}  // namespace agentroute
