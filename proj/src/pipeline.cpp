#include "causalir/pipeline.hpp"

#include "causalir/errors.hpp"
#include "causalir/log.hpp"
#include "causalir/text.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <map>
#include <thread>

namespace causalir {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::size_t parse_size(std::string_view key, std::string_view value) {
    std::size_t out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw Error(ErrorCode::InvalidArgument, "config " + std::string(key) + ": expected a non-negative integer, got '" +
                                                    std::string(value) + "'");
    }
    return out;
}

double parse_real(std::string_view key, std::string_view value) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw Error(ErrorCode::InvalidArgument, "config " + std::string(key) + ": expected a number, got '" +
                                                    std::string(value) + "'");
    }
    return out;
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
    if (value == "false" || value == "0" || value == "no" || value == "off") return false;
    throw Error(ErrorCode::InvalidArgument, "config " + std::string(key) + ": expected true or false, got '" +
                                                std::string(value) + "'");
}

ResultSet with_context(const Topic& topic, std::string_view strategy, const std::function<ResultSet()>& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        throw Error(e.code(), "topic " + topic.topic_id + ": " + std::string(strategy) + ": " + e.what());
    }
}

ResultSet semantic_query(const Topic& topic, const Indexes& indexes, const EmbeddingProvider* provider,
                         const EmbedRequest& request, const PipelineConfig& config) {
    if (indexes.semantic == nullptr || provider == nullptr) {
        throw Error(ErrorCode::InvalidArgument, "semantic search needs a semantic index and an embedding provider");
    }
    if (provider->dimension() != indexes.semantic->dimension()) {
        throw Error(ErrorCode::Dimension, "provider dimension " + std::to_string(provider->dimension()) +
                                              " does not match index dimension " +
                                              std::to_string(indexes.semantic->dimension()));
    }
    const auto query = provider->embed(request);
    auto result = indexes.semantic->search(query, config.per_query_k, config.semantic);
    result.topic_id = topic.topic_id;
    label_sources(result, Strategy::Q1);
    return result;
}

ResultSet lexical_query(const Topic& topic, const Indexes& indexes, std::string_view text,
                        const PipelineConfig& config) {
    if (indexes.lexical == nullptr) throw Error(ErrorCode::InvalidArgument, "lexical search needs a lexical index");
    const auto tokens = preprocess(text);
    auto result = indexes.lexical->search(config.bm25, tokens, config.per_query_k);
    result.topic_id = topic.topic_id;
    label_sources(result, Strategy::Q2);
    return result;
}

} // namespace

Baseline parse_baseline(std::string_view name) {
    if (name == "narrative-bm25") return Baseline::NarrativeBm25;
    if (name == "query-bm25") return Baseline::QueryBm25;
    if (name == "query+narrative-semantic") return Baseline::QueryNarrativeSemantic;
    if (name == "query-semantic") return Baseline::QuerySemantic;
    throw Error(ErrorCode::InvalidArgument,
                "unknown baseline '" + std::string(name) +
                    "' (expected narrative-bm25, query-bm25, query+narrative-semantic or query-semantic)");
}

std::string_view to_string(Baseline baseline) {
    switch (baseline) {
    case Baseline::NarrativeBm25: return "narrative-bm25";
    case Baseline::QueryBm25: return "query-bm25";
    case Baseline::QueryNarrativeSemantic: return "query+narrative-semantic";
    case Baseline::QuerySemantic: return "query-semantic";
    }
    return "unknown";
}

void PipelineConfig::set(std::string_view key, std::string_view value) {
    key = trim(key);
    value = trim(value);
    if (key == "per_query_k") {
        per_query_k = parse_size(key, value);
    } else if (key == "final_k") {
        final_k = parse_size(key, value);
    } else if (key == "bm25.k1") {
        bm25.k1 = parse_real(key, value);
    } else if (key == "bm25.b") {
        bm25.b = parse_real(key, value);
    } else if (key == "strategies") {
        enable_q1 = enable_q2 = enable_q3 = false;
        std::size_t pos = 0;
        while (pos <= value.size()) {
            const auto comma = std::min(value.find(',', pos), value.size());
            const auto item = trim(value.substr(pos, comma - pos));
            if (item == "q1" || item == "Q1") {
                enable_q1 = true;
            } else if (item == "q2" || item == "Q2") {
                enable_q2 = true;
            } else if (item == "q3" || item == "Q3") {
                enable_q3 = true;
            } else if (!item.empty()) {
                throw Error(ErrorCode::InvalidArgument, "config strategies: unknown strategy '" + std::string(item) + "'");
            }
            pos = comma + 1;
        }
    } else if (key == "max_keywords") {
        keywords.max_keywords = parse_size(key, value);
    } else if (key == "cluster_threshold") {
        keywords.cluster_threshold = parse_real(key, value);
    } else if (key == "damping") {
        keywords.rank.damping = parse_real(key, value);
    } else if (key == "negation_patterns_file") {
        negation_patterns = read_word_list(std::string(value));
    } else if (key == "stopwords_file") {
        const auto words = read_word_list(std::string(value));
        lexicon.stopwords = {words.begin(), words.end()};
    } else if (key == "verbs_file") {
        const auto words = read_word_list(std::string(value));
        lexicon.verbs = {words.begin(), words.end()};
    } else if (key == "normalization") {
        if (value == "none") {
            normalization = Normalization::None;
        } else if (value == "minmax") {
            normalization = Normalization::MinMax;
        } else {
            throw Error(ErrorCode::InvalidArgument, "config normalization: expected none or minmax");
        }
    } else if (key == "lenient") {
        lenient = parse_bool(key, value);
    } else if (key == "semantic_mode") {
        semantic.mode = parse_semantic_mode(value);
    } else if (key == "search_budget") {
        semantic.search_budget = parse_size(key, value);
    } else if (key == "threads") {
        threads = parse_size(key, value);
    } else {
        throw Error(ErrorCode::InvalidArgument, "unknown config key '" + std::string(key) + "'");
    }
}

void PipelineConfig::apply_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config file " + path.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw Error(ErrorCode::Parse, path.string() + ":" + std::to_string(line_no) + ": expected key = value");
        }
        try {
            set(view.substr(0, eq), view.substr(eq + 1));
        } catch (const Error& e) {
            throw Error(e.code(), path.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
    PipelineConfig config;
    config.apply_file(path);
    return config;
}

void PipelineConfig::validate() const {
    if (per_query_k == 0 || final_k == 0) throw Error(ErrorCode::InvalidArgument, "per_query_k and final_k must be >= 1");
    bm25.validate();
    if (!(keywords.rank.damping >= 0.0 && keywords.rank.damping < 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "damping must lie in [0, 1)");
    }
    if (!enable_q1 && !enable_q2 && !enable_q3) {
        throw Error(ErrorCode::InvalidArgument, "at least one strategy must be enabled");
    }
}

std::string query_narrative_key(const Topic& topic) { return topic.topic_id + ".qn"; }

ResultSet run_q1(const Topic& topic, const SemanticIndex& index, const EmbeddingProvider& provider, std::size_t k,
                 const SemanticSearchOptions& options) {
    PipelineConfig config;
    config.per_query_k = k;
    config.semantic = options;
    return semantic_query(topic, Indexes{nullptr, &index}, &provider, EmbedRequest{topic.topic_id, topic.title},
                          config);
}

ResultSet run_q2(const Topic& topic, const LexicalIndex& index, const Bm25Params& params, std::size_t k) {
    PipelineConfig config;
    config.per_query_k = k;
    config.bm25 = params;
    return lexical_query(topic, Indexes{&index, nullptr}, topic.title, config);
}

std::vector<std::string> narrative_keywords(const Topic& topic, const PipelineConfig& config) {
    const auto filtered = filter_narrative(topic.narrative, config.negation_patterns);
    return topicrank_keywords(filtered, config.keywords, config.lexicon);
}

ResultSet run_q3(const Topic& topic, const LexicalIndex& index, const PipelineConfig& config, std::size_t k) {
    const auto keywords = narrative_keywords(topic, config);
    ResultSet result;
    result.topic_id = topic.topic_id;
    if (keywords.empty()) {
        log_info("topic " + topic.topic_id + ": Q3 found no narrative keywords");
        return result;
    }
    result = index.search(config.bm25, keywords, k);
    result.topic_id = topic.topic_id;
    label_sources(result, Strategy::Q3);
    return result;
}

ResultSet aggregate(std::span<const ResultSet> results, std::size_t final_k) {
    if (final_k == 0) throw Error(ErrorCode::InvalidArgument, "final_k must be >= 1");
    ResultSet out;
    if (results.empty()) return out;
    out.topic_id = results.front().topic_id;
    struct Accumulator {
        std::vector<double> scores;
        StrategySet sources;
    };
    std::map<std::string, Accumulator, std::less<>> merged;
    for (const auto& set : results) {
        if (set.topic_id != out.topic_id) {
            throw Error(ErrorCode::InvalidArgument,
                        "aggregate: mixed topic ids '" + out.topic_id + "' and '" + set.topic_id + "'");
        }
        for (const auto& hit : set.hits) {
            auto& acc = merged[hit.doc_id];
            acc.scores.push_back(hit.score);
            acc.sources |= hit.sources;
        }
    }
    out.hits.reserve(merged.size());
    for (auto& [id, acc] : merged) {
        // Summing in sorted order makes the total independent of input order.
        std::sort(acc.scores.begin(), acc.scores.end());
        double total = 0.0;
        for (const double x : acc.scores) total += x;
        out.hits.push_back(ScoredHit{id, total, acc.sources});
    }
    sort_and_truncate(out.hits, final_k);
    return out;
}

void min_max_normalize(ResultSet& results) {
    if (results.hits.empty()) return;
    const auto [lo, hi] = std::minmax_element(results.hits.begin(), results.hits.end(),
                                              [](const auto& a, const auto& b) { return a.score < b.score; });
    const double min = lo->score;
    const double range = hi->score - min;
    for (auto& hit : results.hits) hit.score = range > 0.0 ? (hit.score - min) / range : 1.0;
    std::stable_sort(results.hits.begin(), results.hits.end(), ranks_before);
}

ResultSet run_pipeline(const Topic& topic, const Indexes& indexes, const EmbeddingProvider* provider,
                       const PipelineConfig& config) {
    config.validate();
    std::vector<ResultSet> parts;
    std::vector<std::string_view> names;
    auto attempt = [&](bool enabled, std::string_view name, const std::function<ResultSet()>& fn) {
        if (!enabled) return;
        try {
            parts.push_back(with_context(topic, name, fn));
            names.push_back(name);
        } catch (const Error& e) {
            if (!config.lenient) throw;
            log_warn(std::string(e.what()) + " (continuing without " + std::string(name) + ")");
        }
    };
    attempt(config.enable_q1, "Q1", [&] {
        return semantic_query(topic, indexes, provider, EmbedRequest{topic.topic_id, topic.title}, config);
    });
    attempt(config.enable_q2, "Q2", [&] { return lexical_query(topic, indexes, topic.title, config); });
    attempt(config.enable_q3, "Q3", [&] {
        if (indexes.lexical == nullptr) throw Error(ErrorCode::InvalidArgument, "Q3 needs a lexical index");
        return run_q3(topic, *indexes.lexical, config, config.per_query_k);
    });

    if (config.normalization == Normalization::MinMax) {
        for (auto& part : parts) min_max_normalize(part);
    }
    std::string counts;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (!counts.empty()) counts += ' ';
        counts += std::string(names[i]) + "=" + std::to_string(parts[i].hits.size());
    }
    log_info("topic " + topic.topic_id + ": " + counts);

    auto result = aggregate(parts, config.final_k);
    result.topic_id = topic.topic_id;
    return result;
}

ResultSet run_baseline(Baseline baseline, const Topic& topic, const Indexes& indexes,
                       const EmbeddingProvider* provider, const PipelineConfig& config) {
    config.bm25.validate();
    const auto name = to_string(baseline);
    return with_context(topic, name, [&] {
        switch (baseline) {
        case Baseline::NarrativeBm25: return lexical_query(topic, indexes, topic.narrative, config);
        case Baseline::QueryBm25: return lexical_query(topic, indexes, topic.title, config);
        case Baseline::QueryNarrativeSemantic: {
            const std::string text = topic.title + " " + topic.narrative;
            const std::string key = query_narrative_key(topic);
            return semantic_query(topic, indexes, provider, EmbedRequest{key, text}, config);
        }
        case Baseline::QuerySemantic:
            return semantic_query(topic, indexes, provider, EmbedRequest{topic.topic_id, topic.title}, config);
        }
        throw Error(ErrorCode::Internal, "unhandled baseline");
    });
}

std::vector<ResultSet> run_topics(std::span<const Topic> topics, const std::function<ResultSet(const Topic&)>& fn,
                                  std::size_t threads) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(1, topics.size()));
    std::vector<ResultSet> out(topics.size());
    std::vector<std::exception_ptr> errors(topics.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < topics.size(); i = next++) {
            try {
                out[i] = fn(topics[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    {
        std::vector<std::jthread> pool;
        for (std::size_t i = 1; i < threads; ++i) pool.emplace_back(worker);
        worker();
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

} // namespace causalir
