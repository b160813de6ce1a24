#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace causalir {

/// Query strategies of the hybrid pipeline.
enum class Strategy : std::uint8_t {
    Q1 = 1, // title against the semantic index
    Q2 = 2, // title against the lexical index
    Q3 = 4, // narrative keywords against the lexical index
};

class StrategySet {
public:
    constexpr StrategySet() = default;
    constexpr StrategySet(Strategy s) : bits_(static_cast<std::uint8_t>(s)) {} // NOLINT

    constexpr bool empty() const { return bits_ == 0; }
    constexpr bool contains(Strategy s) const { return (bits_ & static_cast<std::uint8_t>(s)) != 0; }
    constexpr std::uint8_t bits() const { return bits_; }

    constexpr StrategySet& operator|=(StrategySet other) {
        bits_ |= other.bits_;
        return *this;
    }
    friend constexpr StrategySet operator|(StrategySet a, StrategySet b) { return a |= b; }
    friend constexpr bool operator==(StrategySet, StrategySet) = default;

    static constexpr StrategySet from_bits(std::uint8_t bits) {
        StrategySet s;
        s.bits_ = bits & 0x7;
        return s;
    }

    /// "Q1,Q3" style label.
    std::string to_string() const;

private:
    std::uint8_t bits_ = 0;
};

struct ScoredHit {
    std::string doc_id;
    double score = 0.0;
    StrategySet sources;
};

/// Ranked list for one topic: scores non-increasing, ties by doc_id ascending.
struct ResultSet {
    std::string topic_id;
    std::vector<ScoredHit> hits;
};

/// Total order used for every ranked list: higher score first, then doc_id.
inline bool ranks_before(const ScoredHit& a, const ScoredHit& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
}

/// Sorts by ranks_before and keeps the first k hits.
void sort_and_truncate(std::vector<ScoredHit>& hits, std::size_t k);

/// Sets every hit's sources to `label`.
void label_sources(ResultSet& results, StrategySet label);

/// Checks the ResultSet invariants; returns an empty string when valid,
/// otherwise a description of the first violation.
std::string validate_result_set(const ResultSet& results, bool require_sources = true);

} // namespace causalir
