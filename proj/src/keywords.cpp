#include "causalir/keywords.hpp"

#include "causalir/errors.hpp"
#include "causalir/text.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>

namespace causalir {

namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

std::string ascii_lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

constexpr std::string_view kStopwords[] = {
    "i", "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours", "yourself",
    "yourselves", "he", "him", "his", "himself", "she", "her", "hers", "herself", "it", "its", "itself",
    "they", "them", "their", "theirs", "themselves", "what", "which", "who", "whom", "whose", "this",
    "that", "these", "those", "am", "is", "are", "was", "were", "be", "been", "being", "have", "has",
    "had", "having", "do", "does", "did", "doing", "a", "an", "the", "and", "but", "if", "or",
    "because", "as", "until", "while", "of", "at", "by", "for", "with", "about", "against", "between",
    "into", "through", "during", "before", "after", "above", "below", "to", "from", "up", "down", "in",
    "out", "on", "off", "over", "under", "again", "further", "then", "once", "here", "there", "when",
    "where", "why", "how", "all", "any", "both", "each", "few", "more", "most", "other", "some", "such",
    "no", "nor", "not", "only", "own", "same", "so", "than", "too", "very", "s", "t", "can", "will",
    "just", "don", "should", "now", "d", "ll", "m", "o", "re", "ve", "y", "ain", "aren", "couldn",
    "didn", "doesn", "hadn", "hasn", "haven", "isn", "ma", "mightn", "mustn", "needn", "shan",
    "shouldn", "wasn", "weren", "won", "wouldn", "also", "would", "could", "may", "might", "must",
    "shall", "upon", "yet", "however", "etc", "among", "within", "without", "via", "per", "since",
    "though", "although", "whether", "either", "neither", "e", "g", "ie", "eg",
};

constexpr std::string_view kVerbs[] = {
    "say", "says", "said", "tell", "tells", "told", "make", "makes", "made", "take", "takes", "took",
    "taken", "get", "gets", "got", "go", "goes", "went", "gone", "come", "comes", "came", "give",
    "gives", "gave", "given", "know", "knew", "known", "think", "thought", "see", "saw", "seen", "want",
    "wanted", "use", "used", "find", "found", "seem", "seems", "seemed", "become", "became", "include",
    "includes", "included", "including", "mention", "mentions", "mentioned", "mentioning", "describe",
    "describes", "described", "describing", "discuss", "discusses", "discussed", "discussing",
    "contain", "contains", "contained", "containing", "talk", "talks", "talked", "consider",
    "considered", "regard", "regarded", "refer", "refers", "referred", "involve", "involves",
    "involved", "led", "lead", "leads", "caused", "causing", "resulted", "happened", "occurred",
};

} // namespace

std::vector<Sentence> split_sentences(std::string_view text) {
    std::vector<Sentence> out;
    std::size_t start = 0;
    auto flush = [&](std::size_t end) {
        std::size_t b = start;
        while (b < end && is_space(text[b])) ++b;
        const auto body = trim(text.substr(b, end - b));
        if (!body.empty()) out.push_back(Sentence{std::string(body), b});
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if ((c == '.' || c == '!' || c == '?') && (i + 1 == text.size() || is_space(text[i + 1]))) {
            flush(i + 1);
            start = i + 1;
        }
    }
    flush(text.size());
    return out;
}

const std::vector<std::string>& default_negation_patterns() {
    static const std::vector<std::string> patterns{"not relevant", "not considered", "irrelevant", "not related"};
    return patterns;
}

std::string filter_narrative(std::string_view narrative, std::span<const std::string> patterns) {
    std::vector<std::string> lowered;
    for (const auto& p : patterns) {
        if (!p.empty()) lowered.push_back(ascii_lower(p));
    }
    std::string out;
    for (const auto& sentence : split_sentences(narrative)) {
        const auto lower = ascii_lower(sentence.text);
        const bool negated = std::any_of(lowered.begin(), lowered.end(),
                                         [&](const std::string& p) { return lower.find(p) != std::string::npos; });
        if (negated) continue;
        if (!out.empty()) out += ' ';
        out += sentence.text;
    }
    return out;
}

const KeywordLexicon& KeywordLexicon::defaults() {
    static const KeywordLexicon lexicon = [] {
        KeywordLexicon l;
        for (const auto w : kStopwords) l.stopwords.emplace(w);
        for (const auto w : kVerbs) l.verbs.emplace(w);
        return l;
    }();
    return lexicon;
}

std::vector<std::string> read_word_list(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open word list " + path.string());
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto entry = trim(line);
        if (entry.empty() || entry.front() == '#') continue;
        out.push_back(ascii_lower(entry));
    }
    return out;
}

std::vector<Candidate> extract_candidates(std::string_view text, const KeywordLexicon& lexicon) {
    const auto words = split_words(text);
    std::map<std::string, Candidate> by_key;
    std::vector<std::size_t> run;

    auto close_run = [&] {
        if (run.empty()) return;
        Candidate c;
        std::string key;
        for (const auto pos : run) {
            c.words.push_back(words[pos].text);
            c.stems.push_back(normalize_token(words[pos].text));
            if (!key.empty()) key += ' ';
            key += c.stems.back();
        }
        auto [it, inserted] = by_key.try_emplace(key, std::move(c));
        it->second.occurrences.push_back(run.front());
        run.clear();
    };

    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i > 0) {
            // Any punctuation between adjacent words ends the phrase.
            const auto gap = text.substr(words[i - 1].end, words[i].begin - words[i - 1].end);
            if (!trim(gap).empty()) close_run();
        }
        if (lexicon.excludes(words[i].text)) {
            close_run();
        } else {
            run.push_back(i);
        }
    }
    close_run();

    std::vector<Candidate> out;
    out.reserve(by_key.size());
    for (auto& [key, c] : by_key) out.push_back(std::move(c));
    std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
        return a.first_occurrence() < b.first_occurrence();
    });
    return out;
}

double stem_overlap(const Candidate& a, const Candidate& b) {
    std::vector<std::string> sa(a.stems.begin(), a.stems.end());
    std::vector<std::string> sb(b.stems.begin(), b.stems.end());
    std::sort(sa.begin(), sa.end());
    sa.erase(std::unique(sa.begin(), sa.end()), sa.end());
    std::sort(sb.begin(), sb.end());
    sb.erase(std::unique(sb.begin(), sb.end()), sb.end());
    std::vector<std::string> common;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
    const std::size_t uni = sa.size() + sb.size() - common.size();
    return uni == 0 ? 0.0 : static_cast<double>(common.size()) / static_cast<double>(uni);
}

std::vector<TopicCluster> cluster_topics(std::span<const Candidate> candidates, double threshold) {
    const std::size_t n = candidates.size();
    // Canonical order so the result does not depend on input order.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (candidates[a].first_occurrence() != candidates[b].first_occurrence()) {
            return candidates[a].first_occurrence() < candidates[b].first_occurrence();
        }
        return candidates[a].stems < candidates[b].stems;
    });

    std::vector<double> sim(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            sim[i * n + j] = sim[j * n + i] = stem_overlap(candidates[order[i]], candidates[order[j]]);
        }
    }

    // Clusters over canonical positions.
    std::vector<std::vector<std::size_t>> clusters(n);
    for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};

    auto average_link = [&](const std::vector<std::size_t>& a, const std::vector<std::size_t>& b) {
        double total = 0.0;
        for (const auto i : a) {
            for (const auto j : b) total += sim[i * n + j];
        }
        return total / static_cast<double>(a.size() * b.size());
    };

    while (clusters.size() > 1) {
        double best = -1.0;
        std::size_t best_a = 0;
        std::size_t best_b = 0;
        for (std::size_t a = 0; a < clusters.size(); ++a) {
            for (std::size_t b = a + 1; b < clusters.size(); ++b) {
                const double s = average_link(clusters[a], clusters[b]);
                if (s > best) {
                    best = s;
                    best_a = a;
                    best_b = b;
                }
            }
        }
        if (best < threshold) break;
        auto& target = clusters[best_a];
        target.insert(target.end(), clusters[best_b].begin(), clusters[best_b].end());
        std::sort(target.begin(), target.end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(best_b));
    }

    // Canonical positions are sorted by first occurrence, so clusters keyed
    // by their smallest member come out in first-occurrence order.
    std::sort(clusters.begin(), clusters.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    std::vector<TopicCluster> out;
    out.reserve(clusters.size());
    for (const auto& c : clusters) {
        TopicCluster topic;
        for (const auto pos : c) topic.push_back(order[pos]);
        std::sort(topic.begin(), topic.end());
        out.push_back(std::move(topic));
    }
    return out;
}

std::vector<double> rank_graph(std::span<const double> weights, std::size_t n, const RankOptions& options,
                               std::size_t* iterations) {
    if (weights.size() != n * n) throw Error(ErrorCode::InvalidArgument, "weight matrix is not n x n");
    if (n == 0) {
        if (iterations) *iterations = 0;
        return {};
    }
    std::vector<double> out_weight(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) out_weight[j] += weights[j * n + k];
    }
    const double uniform = 1.0 / static_cast<double>(n);
    std::vector<double> scores(n, uniform);
    std::vector<double> next(n);
    std::size_t it = 0;
    while (it < options.max_iterations) {
        ++it;
        double dangling = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (out_weight[j] == 0.0) dangling += scores[j];
        }
        for (std::size_t i = 0; i < n; ++i) {
            double incoming = dangling * uniform;
            for (std::size_t j = 0; j < n; ++j) {
                if (out_weight[j] > 0.0) incoming += scores[j] * weights[j * n + i] / out_weight[j];
            }
            next[i] = (1.0 - options.damping) * uniform + options.damping * incoming;
        }
        double residual = 0.0;
        for (std::size_t i = 0; i < n; ++i) residual += std::abs(next[i] - scores[i]);
        scores.swap(next);
        if (residual < options.tolerance) break;
    }
    if (iterations) *iterations = it;
    return scores;
}

TopicGraph rank_topics(std::span<const Candidate> candidates, std::vector<TopicCluster> clusters,
                       const RankOptions& options) {
    if (clusters.empty()) throw Error(ErrorCode::InvalidArgument, "rank_topics needs at least one topic");
    TopicGraph graph;
    graph.topics = std::move(clusters);
    const std::size_t n = graph.topics.size();
    graph.weights.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double w = 0.0;
            for (const auto ci : graph.topics[i]) {
                for (const auto cj : graph.topics[j]) {
                    for (const auto pi : candidates[ci].occurrences) {
                        for (const auto pj : candidates[cj].occurrences) {
                            const auto d = pi > pj ? pi - pj : pj - pi;
                            if (d > 0) w += 1.0 / static_cast<double>(d);
                        }
                    }
                }
            }
            graph.weights[i * n + j] = graph.weights[j * n + i] = w;
        }
    }
    graph.scores = rank_graph(graph.weights, n, options, &graph.iterations);
    return graph;
}

std::vector<std::string> topicrank_keywords(std::string_view text, const KeywordOptions& options,
                                            const KeywordLexicon& lexicon) {
    const auto candidates = extract_candidates(text, lexicon);
    if (candidates.empty() || options.max_keywords == 0) return {};
    auto graph = rank_topics(candidates, cluster_topics(candidates, options.cluster_threshold), options.rank);

    auto earliest = [&](const TopicCluster& topic) {
        return *std::min_element(topic.begin(), topic.end(), [&](std::size_t a, std::size_t b) {
            return candidates[a].first_occurrence() < candidates[b].first_occurrence();
        });
    };
    std::vector<std::size_t> order(graph.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (graph.scores[a] != graph.scores[b]) return graph.scores[a] > graph.scores[b];
        return candidates[earliest(graph.topics[a])].first_occurrence() <
               candidates[earliest(graph.topics[b])].first_occurrence();
    });

    std::vector<std::string> keywords;
    std::unordered_set<std::string> seen;
    for (const auto t : order) {
        for (const auto& stem : candidates[earliest(graph.topics[t])].stems) {
            if (lexicon.stopwords.contains(stem) || !seen.insert(stem).second) continue;
            keywords.push_back(stem);
            if (keywords.size() == options.max_keywords) return keywords;
        }
    }
    return keywords;
}

} // namespace causalir
