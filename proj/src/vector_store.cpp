#include "causalir/vector_store.hpp"

#include "binary_io.hpp"
#include "causalir/errors.hpp"

#include <fstream>
#include <limits>

namespace causalir {

namespace {
constexpr std::string_view kMagic = "CIRSTORE";
}

VectorStore::VectorStore(VectorRecords records) : records_(std::move(records)) {
    if (records_.values.size() != records_.ids.size() * records_.dimension) {
        throw Error(ErrorCode::Dimension, "vector store: value count does not match ids x dimension");
    }
    if (records_.size() > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::InvalidArgument, "vector store: too many rows");
    }
    norms_.reserve(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i) {
        if (!rows_.emplace(records_.ids[i], i).second) {
            throw Error(ErrorCode::InvalidArgument, "vector store: duplicate id '" + records_.ids[i] + "'");
        }
        const double n = l2_norm(records_.row(i));
        if (!(n > 0.0)) {
            throw Error(ErrorCode::InvalidArgument, "vector store: zero vector for '" + records_.ids[i] + "'");
        }
        norms_.push_back(n);
    }
}

std::optional<std::size_t> VectorStore::find(std::string_view id) const {
    const auto it = rows_.find(std::string(id));
    if (it == rows_.end()) return std::nullopt;
    return it->second;
}

double VectorStore::cosine(std::span<const double> query, double query_norm, std::size_t i) const {
    return dot(query, row(i)) / (query_norm * norms_[i]);
}

double VectorStore::check_query(std::span<const double> query, std::size_t k) const {
    if (query.size() != dimension()) {
        throw Error(ErrorCode::Dimension, "query has dimension " + std::to_string(query.size()) +
                                              ", index has " + std::to_string(dimension()));
    }
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
    const double n = l2_norm(query);
    if (n == 0.0) throw Error(ErrorCode::InvalidArgument, "zero query vector");
    return n;
}

ResultSet VectorStore::exact_search(std::span<const double> query, std::size_t k) const {
    const double qn = check_query(query, k);
    ResultSet result;
    result.hits.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) {
        result.hits.push_back(ScoredHit{records_.ids[i], cosine(query, qn, i), {}});
    }
    sort_and_truncate(result.hits, k);
    return result;
}

ResultSet VectorStore::rank_rows(std::span<const double> query, std::span<const std::uint32_t> rows,
                                 std::size_t k) const {
    const double qn = check_query(query, k);
    ResultSet result;
    result.hits.reserve(rows.size());
    for (const auto i : rows) {
        result.hits.push_back(ScoredHit{records_.ids.at(i), cosine(query, qn, i), {}});
    }
    sort_and_truncate(result.hits, k);
    return result;
}

void VectorStore::save(std::ostream& out) const {
    detail::BinaryWriter w(out);
    w.bytes(kMagic);
    w.u32(kFormatVersion);
    w.u64(dimension());
    w.u64(size());
    for (std::size_t i = 0; i < size(); ++i) {
        w.str(records_.ids[i]);
        for (const double x : row(i)) w.f64(x);
    }
    w.check("vector store snapshot");
}

void VectorStore::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    save(out);
}

VectorStore VectorStore::load(std::istream& in) {
    detail::BinaryReader r(in, "vector store snapshot");
    r.header(kMagic, kFormatVersion);
    VectorRecords records;
    records.dimension = r.u64();
    const auto n = r.u64();
    if (records.dimension == 0 || records.dimension > (1u << 20)) {
        throw Error(ErrorCode::Format, "vector store snapshot: bad dimension");
    }
    std::vector<double> row(records.dimension);
    for (std::uint64_t i = 0; i < n; ++i) {
        auto id = r.str();
        for (auto& x : row) x = r.f64();
        records.append(std::move(id), row);
    }
    return VectorStore(std::move(records));
}

VectorStore VectorStore::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return load(in);
}

} // namespace causalir
