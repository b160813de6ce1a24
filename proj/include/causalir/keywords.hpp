#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace causalir {

struct Sentence {
    std::string text;
    std::size_t offset = 0; // byte offset of the first character
};

/// Sentences end at '.', '!' or '?' followed by whitespace or end of text.
/// Sentences are trimmed; empty ones are dropped.
std::vector<Sentence> split_sentences(std::string_view text);

/// "not relevant", "not considered", "irrelevant", "not related".
const std::vector<std::string>& default_negation_patterns();

/// Drops every sentence containing one of `patterns` (ASCII case-insensitive
/// substring match) and joins the survivors with single spaces.
std::string filter_narrative(std::string_view narrative, std::span<const std::string> patterns);

/// Words that break candidate keyphrases.
struct KeywordLexicon {
    std::unordered_set<std::string> stopwords;
    std::unordered_set<std::string> verbs;

    bool excludes(const std::string& word) const { return stopwords.contains(word) || verbs.contains(word); }

    /// Embedded English function words and common verbs.
    static const KeywordLexicon& defaults();
};

/// One entry per line; blank lines and lines starting with '#' are skipped.
/// Entries are trimmed and ASCII-lowercased.
std::vector<std::string> read_word_list(const std::filesystem::path& path);

/// A keyphrase candidate: a maximal run of words containing no stopword,
/// verb or punctuation. Identical stem sequences are merged.
struct Candidate {
    std::vector<std::string> words; // surface form of the first occurrence
    std::vector<std::string> stems;
    std::vector<std::size_t> occurrences; // word positions, ascending

    std::size_t first_occurrence() const { return occurrences.front(); }
};

/// Candidates ordered by first occurrence.
std::vector<Candidate> extract_candidates(std::string_view text,
                                          const KeywordLexicon& lexicon = KeywordLexicon::defaults());

/// Jaccard similarity of the two candidates' stem sets.
double stem_overlap(const Candidate& a, const Candidate& b);

/// Candidate indices forming one topic, ascending.
using TopicCluster = std::vector<std::size_t>;

/// Average-linkage agglomerative clustering on stem_overlap; clusters keep
/// merging while the best pair's average similarity is >= threshold.
/// Output clusters are ordered by their earliest first occurrence.
std::vector<TopicCluster> cluster_topics(std::span<const Candidate> candidates, double threshold = 0.25);

struct RankOptions {
    double damping = 0.85;
    double tolerance = 1e-6; // L1 change between iterations
    std::size_t max_iterations = 100;
};

/// Complete topic graph with converged scores.
struct TopicGraph {
    std::vector<TopicCluster> topics;
    std::vector<double> weights; // row-major, topics.size() squared
    std::vector<double> scores;
    std::size_t iterations = 0;

    std::size_t size() const { return topics.size(); }
    double weight(std::size_t i, std::size_t j) const { return weights[i * topics.size() + j]; }
};

/// Damped random walk over a symmetric weight matrix, starting uniform:
///   s_i <- (1 - d) / n + d * sum_j s_j * w_ji / sum_k w_jk
/// Rows without weight spread their mass uniformly.
std::vector<double> rank_graph(std::span<const double> weights, std::size_t n, const RankOptions& options = {},
                               std::size_t* iterations = nullptr);

/// Edge weight between two topics: sum over occurrence pairs of
/// 1 / |position distance|.
TopicGraph rank_topics(std::span<const Candidate> candidates, std::vector<TopicCluster> clusters,
                       const RankOptions& options = {});

struct KeywordOptions {
    std::size_t max_keywords = 15;
    double cluster_threshold = 0.25;
    RankOptions rank;
};

/// TopicRank keyphrases, flattened to unique stemmed tokens in topic order.
std::vector<std::string> topicrank_keywords(std::string_view text, const KeywordOptions& options = {},
                                            const KeywordLexicon& lexicon = KeywordLexicon::defaults());

} // namespace causalir
