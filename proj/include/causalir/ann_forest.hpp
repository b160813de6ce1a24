#pragma once

#include "causalir/results.hpp"
#include "causalir/vector_store.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

namespace causalir {

struct ForestParams {
    std::size_t num_trees = 100;
    std::size_t leaf_capacity = 16;
    std::uint64_t seed = 42;
    /// Recursion limit; deeper subsets become (possibly oversized) leaves.
    std::size_t max_depth = 64;

    friend bool operator==(const ForestParams&, const ForestParams&) = default;
};

/// Default candidate budget for a top-k query: max(2k, 100).
std::size_t default_search_budget(std::size_t k);

/// Forest of random-projection trees over a VectorStore (angular metric).
///
/// Every internal node splits its rows by the perpendicular bisector of two
/// randomly chosen, normalized rows. Every row sits in exactly one leaf per
/// tree. Trees are built from independent RNG streams derived from the seed
/// and the tree index, so results do not depend on the thread count.
class AnnForest {
public:
    static constexpr std::uint32_t kFormatVersion = 1;

    struct Node {
        std::int32_t left = -1; // -1 marks a leaf
        std::int32_t right = -1;
        std::uint32_t plane = 0; // index into the tree's plane pool
        std::uint32_t leaf_begin = 0;
        std::uint32_t leaf_count = 0;

        bool is_leaf() const { return left < 0; }
        friend bool operator==(const Node&, const Node&) = default;
    };

    struct Tree {
        std::vector<Node> nodes;    // nodes[0] is the root
        std::vector<double> planes; // (dimension + 1) per plane: normal, then offset
        std::vector<std::uint32_t> items;

        friend bool operator==(const Tree&, const Tree&) = default;
    };

    AnnForest() = default;

    static AnnForest build(const VectorStore& store, const ForestParams& params, std::size_t threads = 1);

    const ForestParams& params() const { return params_; }
    std::size_t num_trees() const { return trees_.size(); }
    const Tree& tree(std::size_t t) const { return trees_.at(t); }
    std::size_t num_rows() const { return num_rows_; }
    std::size_t dimension() const { return dimension_; }

    /// Best-first traversal of all trees through one priority queue keyed
    /// by the smallest margin along the path. Stops once `budget` distinct
    /// rows are collected or every leaf is visited.
    std::vector<std::uint32_t> candidates(std::span<const double> query, std::size_t budget) const;

    /// candidates() followed by exact cosine re-ranking.
    ResultSet search(const VectorStore& store, std::span<const double> query, std::size_t k,
                     std::size_t budget) const;

    void save(std::ostream& out) const;
    void save(const std::filesystem::path& path) const;
    static AnnForest load(std::istream& in);
    static AnnForest load(const std::filesystem::path& path);

    friend bool operator==(const AnnForest&, const AnnForest&) = default;

private:
    void check_store(const VectorStore& store) const;

    ForestParams params_;
    std::size_t num_rows_ = 0;
    std::size_t dimension_ = 0;
    std::vector<Tree> trees_;
};

} // namespace causalir
