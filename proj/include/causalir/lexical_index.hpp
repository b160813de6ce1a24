#pragma once

#include "causalir/corpus.hpp"
#include "causalir/results.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace causalir {

/// Okapi BM25 free parameters.
struct Bm25Params {
    double k1 = 1.5; // term-frequency saturation
    double b = 0.75; // document-length normalization

    /// Throws InvalidArgument unless k1 >= 0 and 0 <= b <= 1.
    void validate() const;
};

struct Posting {
    std::uint32_t doc = 0; // document ordinal
    std::uint32_t tf = 0;  // occurrences of the term in the document

    friend bool operator==(const Posting&, const Posting&) = default;
};

/// Immutable inverted index with the corpus statistics BM25 needs.
///
/// Postings are sorted by document ordinal. The document frequency of a
/// term is the length of its postings list. Ordinals follow insertion order.
class LexicalIndex {
public:
    static constexpr std::uint32_t kFormatVersion = 1;

    /// Incremental construction; finish() freezes the index.
    class Builder {
    public:
        /// Throws InvalidArgument on a duplicate doc_id.
        void add(const TokenizedDocument& doc);
        LexicalIndex finish() &&;

    private:
        std::vector<std::string> ids_;
        std::unordered_map<std::string, std::uint32_t> ordinals_;
        std::vector<std::uint32_t> lengths_;
        std::unordered_map<std::string, std::vector<Posting>> postings_;
    };

    LexicalIndex() = default;

    static LexicalIndex build(std::span<const TokenizedDocument> docs);

    std::size_t num_docs() const { return ids_.size(); }
    std::size_t num_terms() const { return postings_.size(); }
    std::uint64_t total_tokens() const { return total_tokens_; }
    double avg_doc_length() const { return avg_doc_length_; }

    std::uint32_t doc_length(std::uint32_t ordinal) const { return lengths_.at(ordinal); }
    const std::string& doc_id(std::uint32_t ordinal) const { return ids_.at(ordinal); }
    std::optional<std::uint32_t> ordinal(std::string_view doc_id) const;

    std::size_t document_frequency(const std::string& token) const;
    std::span<const Posting> postings(const std::string& token) const;

    /// Vocabulary in lexicographic order.
    std::vector<std::string> terms() const;

    /// ln(1 + (N - df + 0.5) / (df + 0.5)); zero for an empty index.
    double idf(const std::string& token) const;

    /// BM25 of one document. Every occurrence of a repeated query token
    /// contributes once.
    double bm25_score(const Bm25Params& params, std::span<const std::string> query,
                      std::uint32_t ordinal) const;

    /// Top-k documents with score > 0, ties broken by doc_id ascending.
    /// Hits carry no strategy label.
    ResultSet search(const Bm25Params& params, std::span<const std::string> query,
                     std::size_t k) const;

    void save(std::ostream& out) const;
    void save(const std::filesystem::path& path) const;
    static LexicalIndex load(std::istream& in);
    static LexicalIndex load(const std::filesystem::path& path);

private:
    double term_weight(const Bm25Params& params, double idf, std::uint32_t tf,
                       std::uint32_t doc_length) const;
    void finalize_stats();

    std::vector<std::string> ids_;
    std::unordered_map<std::string, std::uint32_t> ordinals_;
    std::vector<std::uint32_t> lengths_;
    std::unordered_map<std::string, std::vector<Posting>> postings_;
    std::uint64_t total_tokens_ = 0;
    double avg_doc_length_ = 0.0;
};

} // namespace causalir
