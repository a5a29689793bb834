#include "agentroute/lexical_index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <unordered_map>

namespace agentroute {

namespace {
constexpr const char* kFormatTag = "agentroute-lexical-index/v1";
}

void sort_ranked(std::vector<ScoredEntity>& items) {
    std::sort(items.begin(), items.end(), [](const ScoredEntity& a, const ScoredEntity& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.ordinal < b.ordinal;
    });
}

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string current;
    for (unsigned char c : text) {
        bool word_char;
        if (c >= 0x80) {
            word_char = true;  // keep multi-byte sequences intact
        } else {
            word_char = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
        }
        if (word_char) {
            current.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a')
                                                   : static_cast<char>(c));
        } else if (!current.empty()) {
            tokens.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

LexicalIndex LexicalIndex::build(const std::vector<CatalogEntity>& entities, Bm25Params params,
                                 CorpusScope scope) {
    if (entities.empty()) {
        throw EmptyCorpus("lexical index build requires a non-empty corpus");
    }
    if (!(params.k1 > 0.0)) {
        throw ConfigError("bm25 k1 must be > 0");
    }
    if (params.b < 0.0 || params.b > 1.0) {
        throw ConfigError("bm25 b must be in [0, 1]");
    }

    LexicalIndex idx;
    idx.params_ = params;
    idx.scope_ = scope;
    idx.doc_lengths_.reserve(entities.size());

    std::uint64_t total_len = 0;
    for (std::uint32_t ord = 0; ord < entities.size(); ++ord) {
        const auto& e = entities[ord];
        idx.entity_ids_.push_back(e.id);
        idx.entity_kinds_.push_back(e.kind);

        std::unordered_map<std::string, std::uint32_t> tf;
        auto tokens = tokenize(e.text);
        for (auto& t : tokens) ++tf[t];
        idx.doc_lengths_.push_back(static_cast<std::uint32_t>(tokens.size()));
        total_len += tokens.size();

        // Ordinals arrive in ascending order, so postings lists stay sorted.
        for (auto& [term, count] : tf) {
            idx.postings_[term].push_back(Posting{ord, count});
        }
    }
    idx.avg_doc_length_ = static_cast<double>(total_len) / static_cast<double>(entities.size());
    return idx;
}

RankedList LexicalIndex::score(std::string_view query) const {
    RankedList out;
    out.scope = scope_;
    auto query_tokens = tokenize(query);
    if (query_tokens.empty() || doc_lengths_.empty()) return out;

    const double n_docs = static_cast<double>(doc_count());
    std::unordered_map<std::uint32_t, double> acc;
    for (const auto& term : query_tokens) {
        auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        const auto& plist = it->second;
        const double df = static_cast<double>(plist.size());
        const double idf = std::log(1.0 + (n_docs - df + 0.5) / (df + 0.5));
        for (const auto& p : plist) {
            const double tf = static_cast<double>(p.tf);
            const double dl = static_cast<double>(doc_lengths_[p.ordinal]);
            const double norm =
                tf + params_.k1 * (1.0 - params_.b + params_.b * dl / avg_doc_length_);
            acc[p.ordinal] += idf * (tf * (params_.k1 + 1.0)) / norm;
        }
    }

    out.items.reserve(acc.size());
    for (const auto& [ord, score] : acc) {
        out.items.push_back(
            ScoredEntity{entity_ids_[ord], entity_kinds_[ord], score, ord, std::nullopt});
    }
    sort_ranked(out.items);
    return out;
}

nlohmann::json LexicalIndex::to_json() const {
    nlohmann::json postings = nlohmann::json::object();
    for (const auto& [term, plist] : postings_) {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& p : plist) arr.push_back({p.ordinal, p.tf});
        postings[term] = std::move(arr);
    }
    nlohmann::json kinds = nlohmann::json::array();
    for (auto k : entity_kinds_) kinds.push_back(to_string(k));
    return nlohmann::json{
        {"format", kFormatTag},
        {"k1", params_.k1},
        {"b", params_.b},
        {"scope", to_string(scope_)},
        {"avg_doc_length", avg_doc_length_},
        {"doc_lengths", doc_lengths_},
        {"entity_ids", entity_ids_},
        {"entity_kinds", std::move(kinds)},
        {"postings", std::move(postings)},
    };
}

LexicalIndex LexicalIndex::from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || doc.value("format", "") != kFormatTag) {
        throw ParseError(std::string("lexical index: unsupported format, expected ") + kFormatTag);
    }
    LexicalIndex idx;
    idx.params_.k1 = doc.at("k1").get<double>();
    idx.params_.b = doc.at("b").get<double>();
    idx.scope_ = corpus_scope_from_string(doc.at("scope").get<std::string>());
    idx.avg_doc_length_ = doc.at("avg_doc_length").get<double>();
    idx.doc_lengths_ = doc.at("doc_lengths").get<std::vector<std::uint32_t>>();
    idx.entity_ids_ = doc.at("entity_ids").get<std::vector<std::string>>();
    for (const auto& k : doc.at("entity_kinds")) {
        idx.entity_kinds_.push_back(k.get<std::string>() == "agent" ? EntityKind::agent
                                                                    : EntityKind::tool);
    }
    for (const auto& [term, arr] : doc.at("postings").items()) {
        std::vector<Posting> plist;
        plist.reserve(arr.size());
        for (const auto& pair : arr) {
            plist.push_back(Posting{pair.at(0).get<std::uint32_t>(), pair.at(1).get<std::uint32_t>()});
        }
        idx.postings_.emplace(term, std::move(plist));
    }
    return idx;
}

void LexicalIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write lexical index: " + path.string());
    out << to_json().dump() << "\n";
}

LexicalIndex LexicalIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open lexical index: " + path.string());
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    return from_json(doc);
}

}  // namespace agentroute
