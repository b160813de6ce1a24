#pragma once

#include "causalir/corpus.hpp"
#include "causalir/embedding.hpp"
#include "causalir/keywords.hpp"
#include "causalir/lexical_index.hpp"
#include "causalir/results.hpp"
#include "causalir/semantic_index.hpp"

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace causalir {

enum class Normalization {
    None,   // raw BM25 and cosine scores are summed
    MinMax, // each strategy's scores are rescaled to [0, 1] before summing
};

enum class Baseline {
    NarrativeBm25,
    QueryBm25,
    QueryNarrativeSemantic,
    QuerySemantic,
};

/// Accepts narrative-bm25, query-bm25, query+narrative-semantic, query-semantic.
Baseline parse_baseline(std::string_view name);
std::string_view to_string(Baseline baseline);

struct PipelineConfig {
    std::size_t per_query_k = 500;
    std::size_t final_k = 500;
    Bm25Params bm25;
    bool enable_q1 = true;
    bool enable_q2 = true;
    bool enable_q3 = true;
    KeywordOptions keywords;
    std::vector<std::string> negation_patterns = default_negation_patterns();
    KeywordLexicon lexicon = KeywordLexicon::defaults();
    Normalization normalization = Normalization::None;
    /// Keep going with the surviving strategies when one fails.
    bool lenient = false;
    SemanticSearchOptions semantic;
    /// Worker threads for multi-topic runs; 0 = hardware concurrency.
    std::size_t threads = 0;

    /// Applies one `key = value` setting; throws InvalidArgument for an
    /// unknown key or a malformed value. Keys are listed in the README.
    void set(std::string_view key, std::string_view value);

    /// Reads `key = value` lines; '#' starts a comment.
    static PipelineConfig load(const std::filesystem::path& path);
    void apply_file(const std::filesystem::path& path);

    void validate() const;
};

/// Indexes a run needs; either may be absent when its strategies are off.
struct Indexes {
    const LexicalIndex* lexical = nullptr;
    const SemanticIndex* semantic = nullptr;
};

/// Provider lookup key for the query-and-narrative baseline text.
std::string query_narrative_key(const Topic& topic);

ResultSet run_q1(const Topic& topic, const SemanticIndex& index, const EmbeddingProvider& provider,
                 std::size_t k, const SemanticSearchOptions& options = {});
ResultSet run_q2(const Topic& topic, const LexicalIndex& index, const Bm25Params& params, std::size_t k);
ResultSet run_q3(const Topic& topic, const LexicalIndex& index, const PipelineConfig& config, std::size_t k);

/// Narrative filter plus keyword extraction, as used by Q3.
std::vector<std::string> narrative_keywords(const Topic& topic, const PipelineConfig& config);

/// Sums scores per doc_id across the inputs, unions their sources, sorts
/// (score desc, doc_id asc) and keeps final_k. Throws InvalidArgument when
/// the inputs disagree on topic_id.
ResultSet aggregate(std::span<const ResultSet> results, std::size_t final_k);

/// Rescales scores to [0, 1]; a constant list maps to 1.
void min_max_normalize(ResultSet& results);

/// Runs the enabled strategies for one topic and aggregates them.
ResultSet run_pipeline(const Topic& topic, const Indexes& indexes, const EmbeddingProvider* provider,
                       const PipelineConfig& config);

/// Single-strategy reference runs, top per_query_k each.
ResultSet run_baseline(Baseline baseline, const Topic& topic, const Indexes& indexes,
                       const EmbeddingProvider* provider, const PipelineConfig& config);

/// Applies `fn` to every topic on `threads` workers; output in topic order.
std::vector<ResultSet> run_topics(std::span<const Topic> topics,
                                  const std::function<ResultSet(const Topic&)>& fn, std::size_t threads);

} // namespace causalir
