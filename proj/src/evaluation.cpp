#include "causalir/evaluation.hpp"

#include "causalir/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace causalir {

namespace {

std::vector<std::string_view> fields_of(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    auto space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (pos < line.size()) {
        while (pos < line.size() && space(line[pos])) ++pos;
        const auto start = pos;
        while (pos < line.size() && !space(line[pos])) ++pos;
        if (pos > start) out.push_back(line.substr(start, pos - start));
    }
    return out;
}

template <typename T>
bool parse_field(std::string_view s, T& out) {
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string> ranked_ids(const std::vector<RunEntry>* entries) {
    std::vector<std::string> ids;
    if (entries == nullptr) return ids;
    ids.reserve(entries->size());
    for (const auto& e : *entries) ids.push_back(e.doc_id);
    return ids;
}

} // namespace

void Qrels::add(const std::string& topic_id, const std::string& doc_id, int grade) {
    if (grade < 0) throw Error(ErrorCode::InvalidArgument, "negative relevance grade for " + topic_id + "/" + doc_id);
    auto [topic_it, new_topic] = judgments_.try_emplace(topic_id);
    if (new_topic) topic_order_.push_back(topic_id);
    if (!topic_it->second.emplace(doc_id, grade).second) {
        throw Error(ErrorCode::InvalidArgument, "duplicate judgment for " + topic_id + "/" + doc_id);
    }
    ++num_judgments_;
}

std::optional<int> Qrels::grade(const std::string& topic_id, const std::string& doc_id) const {
    const auto t = judgments_.find(topic_id);
    if (t == judgments_.end()) return std::nullopt;
    const auto d = t->second.find(doc_id);
    if (d == t->second.end()) return std::nullopt;
    return d->second;
}

std::unordered_set<std::string> Qrels::relevant(const std::string& topic_id) const {
    std::unordered_set<std::string> out;
    const auto t = judgments_.find(topic_id);
    if (t == judgments_.end()) return out;
    for (const auto& [doc, grade] : t->second) {
        if (grade > 0) out.insert(doc);
    }
    return out;
}

Qrels Qrels::read(std::istream& in, const std::string& name) {
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto f = fields_of(line);
        if (f.empty()) continue;
        const std::string at = name + ":" + std::to_string(line_no) + ": ";
        if (f.size() != 4) throw Error(ErrorCode::Parse, at + "expected 'topic_id 0 doc_id grade'");
        int grade = 0;
        if (!parse_field(f[3], grade)) throw Error(ErrorCode::Parse, at + "bad grade '" + std::string(f[3]) + "'");
        try {
            qrels.add(std::string(f[0]), std::string(f[2]), grade);
        } catch (const Error& e) {
            throw Error(ErrorCode::Parse, at + e.what());
        }
    }
    return qrels;
}

Qrels Qrels::read(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open qrels file " + path.string());
    return read(in, path.string());
}

const std::vector<RunEntry>* RunFile::find(const std::string& topic_id) const {
    for (const auto& [topic, entries] : topics) {
        if (topic == topic_id) return &entries;
    }
    return nullptr;
}

RunFile RunFile::from_results(std::span<const ResultSet> results, std::string tag) {
    RunFile run;
    run.tag = std::move(tag);
    for (const auto& set : results) {
        std::vector<RunEntry> entries;
        entries.reserve(set.hits.size());
        for (std::size_t i = 0; i < set.hits.size(); ++i) {
            entries.push_back(RunEntry{set.hits[i].doc_id, i + 1, set.hits[i].score});
        }
        run.topics.emplace_back(set.topic_id, std::move(entries));
    }
    return run;
}

void write_run(std::ostream& out, const RunFile& run) {
    if (run.tag.empty() || run.tag.find_first_of(" \t\r\n") != std::string::npos) {
        throw Error(ErrorCode::InvalidArgument, "run tag must be a single non-empty word");
    }
    char buf[32];
    for (const auto& [topic, entries] : run.topics) {
        for (const auto& e : entries) {
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), e.score);
            out << topic << " Q0 " << e.doc_id << ' ' << e.rank << ' ' << std::string_view(buf, ptr - buf) << ' '
                << run.tag << '\n';
        }
    }
}

void write_run(const std::filesystem::path& path, const RunFile& run) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write run file " + path.string());
    write_run(out, run);
    out.flush();
    if (!out) throw Error(ErrorCode::Io, "write failed: " + path.string());
}

RunFile read_run(std::istream& in, const std::string& name, std::size_t max_depth) {
    RunFile run;
    run.tag.clear();
    std::unordered_map<std::string, std::size_t> topic_index;
    std::unordered_map<std::string, std::unordered_set<std::string>> seen_docs;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto f = fields_of(line);
        if (f.empty()) continue;
        const std::string at = name + ":" + std::to_string(line_no) + ": ";
        if (f.size() != 6) throw Error(ErrorCode::Parse, at + "expected 'topic_id Q0 doc_id rank score tag'");
        RunEntry entry{std::string(f[2]), 0, 0.0};
        if (!parse_field(f[3], entry.rank)) throw Error(ErrorCode::Parse, at + "bad rank '" + std::string(f[3]) + "'");
        if (!parse_field(f[4], entry.score) || !std::isfinite(entry.score)) {
            throw Error(ErrorCode::Parse, at + "bad score '" + std::string(f[4]) + "'");
        }
        if (run.tag.empty()) {
            run.tag = std::string(f[5]);
        } else if (run.tag != f[5]) {
            throw Error(ErrorCode::Parse, at + "run tag changes from '" + run.tag + "' to '" + std::string(f[5]) + "'");
        }
        const std::string topic(f[0]);
        auto [it, inserted] = topic_index.try_emplace(topic, run.topics.size());
        if (inserted) run.topics.emplace_back(topic, std::vector<RunEntry>{});
        auto& entries = run.topics[it->second].second;
        if (entry.rank != entries.size() + 1) {
            throw Error(ErrorCode::Parse, at + "rank " + std::to_string(entry.rank) + " for topic " + topic +
                                              ", expected " + std::to_string(entries.size() + 1));
        }
        if (!entries.empty() && entry.score > entries.back().score) {
            throw Error(ErrorCode::Parse, at + "score increases with rank for topic " + topic);
        }
        if (max_depth != 0 && entry.rank > max_depth) {
            throw Error(ErrorCode::Parse, at + "topic " + topic + " exceeds depth " + std::to_string(max_depth));
        }
        if (!seen_docs[topic].insert(entry.doc_id).second) {
            throw Error(ErrorCode::Parse, at + "document " + entry.doc_id + " repeated for topic " + topic);
        }
        entries.push_back(std::move(entry));
    }
    if (run.tag.empty()) run.tag = "causalir";
    return run;
}

RunFile read_run(const std::filesystem::path& path, std::size_t max_depth) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open run file " + path.string());
    return read_run(in, path.string(), max_depth);
}

double average_precision(std::span<const std::string> ranked, const std::unordered_set<std::string>& relevant) {
    if (relevant.empty()) return 0.0;
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (relevant.contains(ranked[i])) {
            ++hits;
            sum += static_cast<double>(hits) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(relevant.size());
}

double precision_at_k(std::span<const std::string> ranked, const std::unordered_set<std::string>& relevant,
                      std::size_t k) {
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "precision_at_k needs k >= 1");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) {
        if (relevant.contains(ranked[i])) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(k);
}

Evaluation evaluate(const RunFile& run, const Qrels& qrels) {
    Evaluation eval;
    for (const auto& topic : qrels.topics()) {
        const auto relevant = qrels.relevant(topic);
        const auto ids = ranked_ids(run.find(topic));
        TopicScores scores{topic, average_precision(ids, relevant), precision_at_k(ids, relevant, 5),
                           relevant.size(), ids.size()};
        eval.map += scores.average_precision;
        eval.precision_at_5 += scores.precision_at_5;
        eval.per_topic.push_back(std::move(scores));
    }
    if (!eval.per_topic.empty()) {
        eval.map /= static_cast<double>(eval.per_topic.size());
        eval.precision_at_5 /= static_cast<double>(eval.per_topic.size());
    }
    return eval;
}

double mean_over_topics(Metric metric, const RunFile& run, const Qrels& qrels) {
    const auto eval = evaluate(run, qrels);
    return metric == Metric::AveragePrecision ? eval.map : eval.precision_at_5;
}

} // namespace causalir
