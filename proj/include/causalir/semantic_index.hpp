#pragma once

#include "causalir/ann_forest.hpp"
#include "causalir/vector_store.hpp"

#include <optional>

namespace causalir {

enum class SemanticMode {
    Auto,  // exact below kExactThreshold documents or without a forest
    Exact,
    Ann,
};

SemanticMode parse_semantic_mode(std::string_view name);

struct SemanticSearchOptions {
    SemanticMode mode = SemanticMode::Auto;
    /// Candidate budget for ANN search; 0 selects default_search_budget(k).
    std::size_t search_budget = 0;
};

/// Document embeddings plus an optional forest for approximate search.
class SemanticIndex {
public:
    static constexpr std::size_t kExactThreshold = 50'000;

    explicit SemanticIndex(VectorStore store, std::optional<AnnForest> forest = std::nullopt);

    const VectorStore& store() const { return store_; }
    const AnnForest* forest() const { return forest_ ? &*forest_ : nullptr; }
    std::size_t dimension() const { return store_.dimension(); }

    bool uses_ann(SemanticMode mode) const;

    ResultSet search(std::span<const double> query, std::size_t k,
                     const SemanticSearchOptions& options = {}) const;

private:
    VectorStore store_;
    std::optional<AnnForest> forest_;
};

} // namespace causalir
