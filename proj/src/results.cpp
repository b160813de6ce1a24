#include "causalir/results.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

namespace causalir {

std::string StrategySet::to_string() const {
    std::string out;
    for (const auto& [s, name] : {std::pair{Strategy::Q1, "Q1"}, std::pair{Strategy::Q2, "Q2"},
                                 std::pair{Strategy::Q3, "Q3"}}) {
        if (!contains(s)) continue;
        if (!out.empty()) out += ',';
        out += name;
    }
    return out;
}

void sort_and_truncate(std::vector<ScoredHit>& hits, std::size_t k) {
    if (k < hits.size()) {
        std::partial_sort(hits.begin(), hits.begin() + static_cast<std::ptrdiff_t>(k), hits.end(),
                          ranks_before);
        hits.resize(k);
    } else {
        std::sort(hits.begin(), hits.end(), ranks_before);
    }
}

void label_sources(ResultSet& results, StrategySet label) {
    for (auto& hit : results.hits) hit.sources = label;
}

std::string validate_result_set(const ResultSet& results, bool require_sources) {
    std::unordered_set<std::string_view> seen;
    for (std::size_t i = 0; i < results.hits.size(); ++i) {
        const auto& hit = results.hits[i];
        const std::string at = "hit " + std::to_string(i) + " (" + hit.doc_id + "): ";
        if (!std::isfinite(hit.score)) return at + "non-finite score";
        if (require_sources && hit.sources.empty()) return at + "empty sources";
        if (!seen.insert(hit.doc_id).second) return at + "duplicate doc_id";
        if (i > 0 && !ranks_before(results.hits[i - 1], hit)) return at + "out of order";
    }
    return {};
}

} // namespace causalir
