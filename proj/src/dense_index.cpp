#include "agentroute/dense_index.hpp"

#include <cstring>
#include <fstream>

#include "agentroute/simd/kernels.hpp"

namespace agentroute {

namespace {

constexpr char kMagic[8] = {'a', 'r', 'd', 'e', 'n', 's', 'e', '1'};

void write_u64(std::ofstream& out, std::uint64_t v) {
    unsigned char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(buf), 8);
}

std::uint64_t read_u64(std::ifstream& in) {
    unsigned char buf[8];
    in.read(reinterpret_cast<char*>(buf), 8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

void write_string(std::ofstream& out, const std::string& s) {
    write_u64(out, s.size());
    out.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_string(std::ifstream& in) {
    const auto len = read_u64(in);
    std::string s(len, '\0');
    in.read(s.data(), static_cast<std::streamsize>(len));
    return s;
}

}  // namespace

DenseIndex DenseIndex::build(const std::vector<CatalogEntity>& entities, Embedder& embedder,
                             CorpusScope scope) {
    if (entities.empty()) {
        throw EmptyCorpus("dense index build requires a non-empty corpus");
    }
    DenseIndex idx;
    idx.scope_ = scope;
    idx.dimension_ = static_cast<std::size_t>(embedder.spec().dimension);
    idx.fingerprint_ = embedder.spec().fingerprint();

    std::vector<std::string> texts;
    texts.reserve(entities.size());
    for (const auto& e : entities) texts.push_back(e.text);

    auto vectors = embedder.embed_batch(texts);
    idx.matrix_.reserve(entities.size() * idx.dimension_);
    for (std::size_t i = 0; i < entities.size(); ++i) {
        idx.entity_ids_.push_back(entities[i].id);
        idx.entity_kinds_.push_back(entities[i].kind);
        idx.zero_rows_.push_back(vectors[i].is_zero);
        idx.matrix_.insert(idx.matrix_.end(), vectors[i].values.begin(), vectors[i].values.end());
    }
    return idx;
}

RankedList DenseIndex::score(const EmbeddingVector& query) const {
    if (query.dimension() != dimension_) {
        throw DimensionMismatch("query dimension " + std::to_string(query.dimension()) +
                                " does not match index dimension " + std::to_string(dimension_));
    }
    RankedList out;
    out.scope = scope_;
    std::vector<float> scores(size());
    simd::dot_many(query.values, matrix_.data(), size(), dimension_, scores);
    out.items.reserve(size());
    for (std::size_t ord = 0; ord < size(); ++ord) {
        out.items.push_back(ScoredEntity{entity_ids_[ord], entity_kinds_[ord],
                                         static_cast<double>(scores[ord]), ord, std::nullopt});
    }
    sort_ranked(out.items);
    return out;
}

std::span<const float> DenseIndex::row(std::size_t ordinal) const {
    return {matrix_.data() + ordinal * dimension_, dimension_};
}

void DenseIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write dense index: " + path.string());
    out.write(kMagic, sizeof(kMagic));
    write_string(out, fingerprint_);
    write_string(out, to_string(scope_));
    write_u64(out, size());
    write_u64(out, dimension_);
    for (std::size_t i = 0; i < size(); ++i) {
        write_string(out, entity_ids_[i]);
        out.put(entity_kinds_[i] == EntityKind::agent ? 'a' : 't');
        out.put(zero_rows_[i] ? '\x01' : '\x00');
    }
    static_assert(sizeof(float) == 4);
    out.write(reinterpret_cast<const char*>(matrix_.data()),
              static_cast<std::streamsize>(matrix_.size() * sizeof(float)));
    if (!out) throw IoError("write failed for dense index: " + path.string());
}

DenseIndex DenseIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open dense index: " + path.string());
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw ParseError(path.string() + ": unsupported dense index format");
    }
    DenseIndex idx;
    idx.fingerprint_ = read_string(in);
    idx.scope_ = corpus_scope_from_string(read_string(in));
    const auto count = read_u64(in);
    idx.dimension_ = read_u64(in);
    idx.entity_ids_.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        idx.entity_ids_.push_back(read_string(in));
        idx.entity_kinds_.push_back(in.get() == 'a' ? EntityKind::agent : EntityKind::tool);
        idx.zero_rows_.push_back(in.get() != 0);
    }
    idx.matrix_.resize(count * idx.dimension_);
    in.read(reinterpret_cast<char*>(idx.matrix_.data()),
            static_cast<std::streamsize>(idx.matrix_.size() * sizeof(float)));
    if (!in) throw ParseError(path.string() + ": truncated dense index");
    return idx;
}

}  // namespace agentroute
