#include "causalir/lexical_index.hpp"

#include "binary_io.hpp"
#include "causalir/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace causalir {

namespace {
constexpr std::string_view kMagic = "CIRLEXIX";
}

void Bm25Params::validate() const {
    if (!(k1 >= 0.0) || !std::isfinite(k1)) {
        throw Error(ErrorCode::InvalidArgument, "bm25 k1 must be finite and >= 0");
    }
    if (!(b >= 0.0 && b <= 1.0)) {
        throw Error(ErrorCode::InvalidArgument, "bm25 b must lie in [0, 1]");
    }
}

void LexicalIndex::Builder::add(const TokenizedDocument& doc) {
    if (doc.doc_id.empty()) throw Error(ErrorCode::InvalidArgument, "empty doc_id");
    if (ids_.size() >= std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::InvalidArgument, "too many documents for a 32-bit ordinal");
    }
    const auto ordinal = static_cast<std::uint32_t>(ids_.size());
    if (!ordinals_.emplace(doc.doc_id, ordinal).second) {
        throw Error(ErrorCode::InvalidArgument, "duplicate doc_id '" + doc.doc_id + "'");
    }
    ids_.push_back(doc.doc_id);
    lengths_.push_back(static_cast<std::uint32_t>(doc.tokens.size()));

    std::unordered_map<std::string_view, std::uint32_t> counts;
    for (const auto& token : doc.tokens) ++counts[token];
    for (const auto& [token, tf] : counts) {
        // Ordinals grow monotonically, so appending keeps postings sorted.
        postings_[std::string(token)].push_back(Posting{ordinal, tf});
    }
}

LexicalIndex LexicalIndex::Builder::finish() && {
    LexicalIndex index;
    index.ids_ = std::move(ids_);
    index.ordinals_ = std::move(ordinals_);
    index.lengths_ = std::move(lengths_);
    index.postings_ = std::move(postings_);
    index.finalize_stats();
    return index;
}

LexicalIndex LexicalIndex::build(std::span<const TokenizedDocument> docs) {
    Builder builder;
    for (const auto& doc : docs) builder.add(doc);
    return std::move(builder).finish();
}

void LexicalIndex::finalize_stats() {
    total_tokens_ = 0;
    for (const auto len : lengths_) total_tokens_ += len;
    avg_doc_length_ = ids_.empty() ? 0.0
                                   : static_cast<double>(total_tokens_) / static_cast<double>(ids_.size());
}

std::optional<std::uint32_t> LexicalIndex::ordinal(std::string_view doc_id) const {
    const auto it = ordinals_.find(std::string(doc_id));
    if (it == ordinals_.end()) return std::nullopt;
    return it->second;
}

std::size_t LexicalIndex::document_frequency(const std::string& token) const {
    const auto it = postings_.find(token);
    return it == postings_.end() ? 0 : it->second.size();
}

std::span<const Posting> LexicalIndex::postings(const std::string& token) const {
    const auto it = postings_.find(token);
    if (it == postings_.end()) return {};
    return it->second;
}

std::vector<std::string> LexicalIndex::terms() const {
    std::vector<std::string> out;
    out.reserve(postings_.size());
    for (const auto& [term, _] : postings_) out.push_back(term);
    std::sort(out.begin(), out.end());
    return out;
}

double LexicalIndex::idf(const std::string& token) const {
    if (ids_.empty()) return 0.0;
    const auto n = static_cast<double>(ids_.size());
    const auto df = static_cast<double>(document_frequency(token));
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

double LexicalIndex::term_weight(const Bm25Params& params, double idf, std::uint32_t tf,
                                 std::uint32_t doc_length) const {
    const double f = tf;
    // Evaluated left to right as the formula reads: b * |D| / avgdl.
    const double norm = 1.0 - params.b + params.b * doc_length / avg_doc_length_;
    return idf * (f * (params.k1 + 1.0)) / (f + params.k1 * norm);
}

double LexicalIndex::bm25_score(const Bm25Params& params, std::span<const std::string> query,
                                std::uint32_t ordinal) const {
    if (ordinal >= ids_.size()) {
        throw Error(ErrorCode::InvalidArgument, "document ordinal out of range");
    }
    std::vector<double> parts;
    for (const auto& token : query) {
        const auto list = postings(token);
        const auto it = std::lower_bound(list.begin(), list.end(), ordinal,
                                         [](const Posting& p, std::uint32_t o) { return p.doc < o; });
        if (it == list.end() || it->doc != ordinal) continue;
        parts.push_back(term_weight(params, idf(token), it->tf, lengths_[ordinal]));
    }
    // Smallest first: equal multisets of contributions give equal totals.
    std::sort(parts.begin(), parts.end());
    double score = 0.0;
    for (const double x : parts) score += x;
    return score;
}

ResultSet LexicalIndex::search(const Bm25Params& params, std::span<const std::string> query,
                               std::size_t k) const {
    params.validate();
    if (k == 0) throw Error(ErrorCode::InvalidArgument, "k must be >= 1");
    ResultSet result;
    if (ids_.empty() || query.empty()) return result;

    // (doc, contribution) pairs, summed per document in the same order as bm25_score.
    std::vector<std::pair<std::uint32_t, double>> parts;
    for (const auto& token : query) {
        const auto list = postings(token);
        if (list.empty()) continue;
        const double term_idf = idf(token);
        for (const auto& p : list) parts.emplace_back(p.doc, term_weight(params, term_idf, p.tf, lengths_[p.doc]));
    }
    std::sort(parts.begin(), parts.end());

    for (std::size_t i = 0; i < parts.size();) {
        const auto doc = parts[i].first;
        double score = 0.0;
        for (; i < parts.size() && parts[i].first == doc; ++i) score += parts[i].second;
        if (score > 0.0) result.hits.push_back(ScoredHit{ids_[doc], score, {}});
    }
    sort_and_truncate(result.hits, k);
    return result;
}

// Layout: magic, version, num_docs, then per document (id, length),
// num_terms, then per term in lexicographic order: term, df, and
// df (ordinal delta, tf) varint pairs.
void LexicalIndex::save(std::ostream& out) const {
    detail::BinaryWriter w(out);
    w.bytes(kMagic);
    w.u32(kFormatVersion);
    w.u64(ids_.size());
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        w.str(ids_[i]);
        w.varint(lengths_[i]);
    }
    const auto vocab = terms();
    w.u64(vocab.size());
    for (const auto& term : vocab) {
        const auto& list = postings_.at(term);
        w.str(term);
        w.varint(list.size());
        std::uint32_t prev = 0;
        for (const auto& p : list) {
            w.varint(p.doc - prev);
            w.varint(p.tf);
            prev = p.doc;
        }
    }
    w.check("lexical index snapshot");
}

void LexicalIndex::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + path.string());
    save(out);
}

LexicalIndex LexicalIndex::load(std::istream& in) {
    detail::BinaryReader r(in, "lexical index snapshot");
    r.header(kMagic, kFormatVersion);
    LexicalIndex index;
    const auto num_docs = r.u64();
    if (num_docs > std::numeric_limits<std::uint32_t>::max()) {
        throw Error(ErrorCode::Format, "lexical index snapshot: document count out of range");
    }
    for (std::uint64_t i = 0; i < num_docs; ++i) {
        auto id = r.str();
        const auto len = r.varint();
        if (!index.ordinals_.emplace(id, static_cast<std::uint32_t>(i)).second) {
            throw Error(ErrorCode::Format, "lexical index snapshot: duplicate doc_id " + id);
        }
        index.ids_.push_back(std::move(id));
        index.lengths_.push_back(static_cast<std::uint32_t>(len));
    }
    const auto num_terms = r.u64();
    for (std::uint64_t t = 0; t < num_terms; ++t) {
        auto term = r.str();
        const auto df = r.varint();
        if (df == 0 || df > num_docs) {
            throw Error(ErrorCode::Format, "lexical index snapshot: bad document frequency");
        }
        std::vector<Posting> list;
        list.reserve(df);
        std::uint64_t doc = 0;
        for (std::uint64_t j = 0; j < df; ++j) {
            const auto delta = r.varint();
            if (j > 0 && delta == 0) {
                throw Error(ErrorCode::Format, "lexical index snapshot: unsorted postings");
            }
            doc += delta;
            const auto tf = r.varint();
            if (doc >= num_docs || tf == 0) {
                throw Error(ErrorCode::Format, "lexical index snapshot: posting out of range");
            }
            list.push_back(Posting{static_cast<std::uint32_t>(doc), static_cast<std::uint32_t>(tf)});
        }
        index.postings_.emplace(std::move(term), std::move(list));
    }
    index.finalize_stats();
    return index;
}

LexicalIndex LexicalIndex::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
    return load(in);
}

} // namespace causalir
