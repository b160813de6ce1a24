#pragma once

// Reference implementations used by the tests. Each one is written from the
// definitions directly and shares no code with the library.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

struct Hit {
    std::string id;
    double score;
};

inline void sort_hits(std::vector<Hit>& hits) {
    std::sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
}

// Okapi BM25 recomputed from raw token lists for every (query, document) pair.
inline double bm25(const std::vector<std::vector<std::string>>& docs, const std::vector<std::string>& query,
                   std::size_t d, double k1 = 1.5, double b = 0.75) {
    const double n = static_cast<double>(docs.size());
    if (docs.empty()) return 0.0;
    double total = 0.0;
    for (const auto& doc : docs) total += static_cast<double>(doc.size());
    const double avgdl = total / n;
    std::vector<double> parts;
    for (const auto& q : query) {
        double df = 0.0;
        for (const auto& doc : docs) {
            if (std::find(doc.begin(), doc.end(), q) != doc.end()) df += 1.0;
        }
        const double f = static_cast<double>(std::count(docs[d].begin(), docs[d].end(), q));
        if (f == 0.0) continue;
        const double idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        const double len = static_cast<double>(docs[d].size());
        parts.push_back(idf * (f * (k1 + 1.0)) / (f + k1 * (1.0 - b + b * len / avgdl)));
    }
    // Summed smallest first so documents with equal contributions tie exactly.
    std::sort(parts.begin(), parts.end());
    double score = 0.0;
    for (const double x : parts) score += x;
    return score;
}

inline std::vector<Hit> bm25_ranking(const std::vector<std::string>& ids,
                                     const std::vector<std::vector<std::string>>& docs,
                                     const std::vector<std::string>& query, std::size_t k, double k1 = 1.5,
                                     double b = 0.75) {
    std::vector<Hit> hits;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        const double s = bm25(docs, query, d, k1, b);
        if (s > 0.0) hits.push_back({ids[d], s});
    }
    sort_hits(hits);
    if (hits.size() > k) hits.resize(k);
    return hits;
}

inline double cosine(const std::vector<double>& u, const std::vector<double>& v) {
    double uv = 0.0, uu = 0.0, vv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) uv += u[i] * v[i];
    for (std::size_t i = 0; i < u.size(); ++i) uu += u[i] * u[i];
    for (std::size_t i = 0; i < v.size(); ++i) vv += v[i] * v[i];
    return uv / (std::sqrt(uu) * std::sqrt(vv));
}

// Extended-precision cosine for tolerance checks.
inline double cosine_long(const std::vector<double>& u, const std::vector<double>& v) {
    long double uv = 0, uu = 0, vv = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        uv += static_cast<long double>(u[i]) * v[i];
        uu += static_cast<long double>(u[i]) * u[i];
        vv += static_cast<long double>(v[i]) * v[i];
    }
    return static_cast<double>(uv / (std::sqrt(uu) * std::sqrt(vv)));
}

inline std::vector<Hit> cosine_argsort(const std::vector<std::string>& ids,
                                       const std::vector<std::vector<double>>& rows,
                                       const std::vector<double>& query, std::size_t k) {
    std::vector<Hit> hits;
    for (std::size_t i = 0; i < rows.size(); ++i) hits.push_back({ids[i], cosine(query, rows[i])});
    sort_hits(hits);
    if (hits.size() > k) hits.resize(k);
    return hits;
}

// Average precision by walking the ranking once and counting.
inline double average_precision(const std::vector<std::string>& ranked, const std::set<std::string>& relevant) {
    if (relevant.empty()) return 0.0;
    double found = 0.0, sum = 0.0;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (relevant.count(ranked[i])) {
            found += 1.0;
            sum += found / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(relevant.size());
}

inline double precision_at(const std::vector<std::string>& ranked, const std::set<std::string>& relevant,
                           std::size_t k) {
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ranked.size() && i < k; ++i) hits += relevant.count(ranked[i]);
    return static_cast<double>(hits) / static_cast<double>(k);
}

struct Labeled {
    std::string id;
    double score;
    unsigned sources;
};

// Sum of every occurrence's score per id, then the library's ordering rule.
inline std::vector<Labeled> accumulate(const std::vector<std::vector<Labeled>>& sets, std::size_t k) {
    std::map<std::string, std::vector<double>> scores;
    std::map<std::string, unsigned> sources;
    for (const auto& set : sets) {
        for (const auto& h : set) {
            scores[h.id].push_back(h.score);
            sources[h.id] |= h.sources;
        }
    }
    std::vector<Labeled> out;
    for (auto& [id, list] : scores) {
        std::sort(list.begin(), list.end());
        double s = 0.0;
        for (double x : list) s += x;
        out.push_back({id, s, sources[id]});
    }
    std::sort(out.begin(), out.end(), [](const Labeled& a, const Labeled& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.id < b.id;
    });
    if (out.size() > k) out.resize(k);
    return out;
}

// Power iteration in matrix form: s <- (1-d)/n + d * M^T s with M the
// row-normalized weight matrix and zero rows replaced by uniform rows.
inline std::vector<double> power_iteration(const std::vector<std::vector<double>>& w, double d, double tol,
                                           std::size_t max_iter) {
    const std::size_t n = w.size();
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < n; ++j) row += w[i][j];
        for (std::size_t j = 0; j < n; ++j) m[i][j] = row > 0.0 ? w[i][j] / row : 1.0 / static_cast<double>(n);
    }
    std::vector<double> s(n, 1.0 / static_cast<double>(n));
    for (std::size_t it = 0; it < max_iter; ++it) {
        std::vector<double> next(n, (1.0 - d) / static_cast<double>(n));
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) next[i] += d * m[j][i] * s[j];
        }
        double delta = 0.0;
        for (std::size_t i = 0; i < n; ++i) delta += std::abs(next[i] - s[i]);
        s = std::move(next);
        if (delta < tol) break;
    }
    return s;
}

} // namespace oracle
