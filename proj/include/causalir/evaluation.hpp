#pragma once

#include "causalir/results.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace causalir {

/// Relevance judgments. Grades > 0 count as relevant.
class Qrels {
public:
    /// Throws InvalidArgument on a duplicate (topic, doc) pair or a negative grade.
    void add(const std::string& topic_id, const std::string& doc_id, int grade);

    std::optional<int> grade(const std::string& topic_id, const std::string& doc_id) const;
    std::unordered_set<std::string> relevant(const std::string& topic_id) const;

    /// Topics in order of first appearance.
    const std::vector<std::string>& topics() const { return topic_order_; }
    std::size_t size() const { return num_judgments_; }

    /// `topic_id 0 doc_id grade` lines.
    static Qrels read(const std::filesystem::path& path);
    static Qrels read(std::istream& in, const std::string& name = "qrels");

private:
    std::unordered_map<std::string, std::unordered_map<std::string, int>> judgments_;
    std::vector<std::string> topic_order_;
    std::size_t num_judgments_ = 0;
};

struct RunEntry {
    std::string doc_id;
    std::size_t rank = 0;
    double score = 0.0;

    friend bool operator==(const RunEntry&, const RunEntry&) = default;
};

/// A TREC run: per topic, entries ranked 1..n with non-increasing scores.
struct RunFile {
    std::string tag = "causalir";
    std::vector<std::pair<std::string, std::vector<RunEntry>>> topics;

    const std::vector<RunEntry>* find(const std::string& topic_id) const;
    static RunFile from_results(std::span<const ResultSet> results, std::string tag);

    friend bool operator==(const RunFile&, const RunFile&) = default;
};

/// `topic_id Q0 doc_id rank score tag` lines. Scores use the shortest
/// decimal form that reads back to the same double.
void write_run(std::ostream& out, const RunFile& run);
void write_run(const std::filesystem::path& path, const RunFile& run);

/// Validates the run invariants and reports violations with line numbers.
/// `max_depth` of 0 means unlimited.
RunFile read_run(std::istream& in, const std::string& name = "run", std::size_t max_depth = 0);
RunFile read_run(const std::filesystem::path& path, std::size_t max_depth = 0);

/// (1/R) * sum of precision at each rank holding a relevant document, R
/// being the total number of relevant documents (retrieved or not).
/// Zero when R is zero.
double average_precision(std::span<const std::string> ranked, const std::unordered_set<std::string>& relevant);

/// Relevant documents in the first k ranks divided by k (not by the
/// number retrieved).
double precision_at_k(std::span<const std::string> ranked, const std::unordered_set<std::string>& relevant,
                      std::size_t k = 5);

struct TopicScores {
    std::string topic_id;
    double average_precision = 0.0;
    double precision_at_5 = 0.0;
    std::size_t relevant = 0;
    std::size_t retrieved = 0;
};

struct Evaluation {
    double map = 0.0;
    double precision_at_5 = 0.0;
    std::vector<TopicScores> per_topic;
};

/// Means over every topic in the qrels; topics missing from the run score 0.
Evaluation evaluate(const RunFile& run, const Qrels& qrels);

enum class Metric { AveragePrecision, PrecisionAt5 };
double mean_over_topics(Metric metric, const RunFile& run, const Qrels& qrels);

} // namespace causalir
