#pragma once

#include "causalir/results.hpp"
#include "causalir/vector_file.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace causalir {

/// Document embeddings, one row per document, with cached L2 norms.
/// Ids are unique and every row has a positive norm.
class VectorStore {
public:
    static constexpr std::uint32_t kFormatVersion = 1;

    VectorStore() = default;
    explicit VectorStore(VectorRecords records);

    std::size_t size() const { return records_.size(); }
    std::size_t dimension() const { return records_.dimension; }
    const std::string& id(std::size_t row) const { return records_.ids.at(row); }
    std::span<const double> row(std::size_t i) const { return records_.row(i); }
    double norm(std::size_t i) const { return norms_.at(i); }
    std::optional<std::size_t> find(std::string_view id) const;
    const VectorRecords& records() const { return records_; }

    /// Cosine similarity between `query` (with precomputed norm) and a row.
    /// Same arithmetic as cosine_similarity(query, row).
    double cosine(std::span<const double> query, double query_norm, std::size_t row) const;

    /// Brute force over every row; ties broken by doc_id ascending.
    ResultSet exact_search(std::span<const double> query, std::size_t k) const;

    /// Exact cosine re-ranking of the given rows.
    ResultSet rank_rows(std::span<const double> query, std::span<const std::uint32_t> rows,
                        std::size_t k) const;

    /// f64 snapshot; exact round-trip.
    void save(std::ostream& out) const;
    void save(const std::filesystem::path& path) const;
    static VectorStore load(std::istream& in);
    static VectorStore load(const std::filesystem::path& path);

private:
    double check_query(std::span<const double> query, std::size_t k) const;

    VectorRecords records_;
    std::vector<double> norms_;
    std::unordered_map<std::string, std::size_t> rows_;
};

} // namespace causalir
