#include "causalir/semantic_index.hpp"

#include "causalir/errors.hpp"

namespace causalir {

SemanticMode parse_semantic_mode(std::string_view name) {
    if (name == "auto") return SemanticMode::Auto;
    if (name == "exact") return SemanticMode::Exact;
    if (name == "ann") return SemanticMode::Ann;
    throw Error(ErrorCode::InvalidArgument, "unknown semantic mode '" + std::string(name) + "'");
}

SemanticIndex::SemanticIndex(VectorStore store, std::optional<AnnForest> forest)
    : store_(std::move(store)), forest_(std::move(forest)) {
    if (forest_ && (forest_->num_rows() != store_.size() || forest_->dimension() != store_.dimension())) {
        throw Error(ErrorCode::InvalidArgument, "forest does not match the vector store");
    }
}

bool SemanticIndex::uses_ann(SemanticMode mode) const {
    switch (mode) {
    case SemanticMode::Exact: return false;
    case SemanticMode::Ann:
        if (!forest_) throw Error(ErrorCode::InvalidArgument, "ANN search requested but no forest is loaded");
        return true;
    case SemanticMode::Auto: return forest_.has_value() && store_.size() >= kExactThreshold;
    }
    return false;
}

ResultSet SemanticIndex::search(std::span<const double> query, std::size_t k,
                                const SemanticSearchOptions& options) const {
    if (!uses_ann(options.mode)) return store_.exact_search(query, k);
    const std::size_t budget = options.search_budget == 0 ? default_search_budget(k) : options.search_budget;
    return forest_->search(store_, query, k, budget);
}

} // namespace causalir
