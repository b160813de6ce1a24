#include "causalir/embedding.hpp"

#include "causalir/errors.hpp"
#include "causalir/http_embedder.hpp"
#include "causalir/text.hpp"
#include "causalir/vector_file.hpp"

#include <charconv>
#include <cmath>

namespace causalir {

double dot(std::span<const double> u, std::span<const double> v) {
    double sum = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) sum += u[i] * v[i];
    return sum;
}

double l2_norm(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) {
        throw Error(ErrorCode::Dimension, "cosine_similarity: dimensions " + std::to_string(u.size()) +
                                              " and " + std::to_string(v.size()));
    }
    const double nu = l2_norm(u);
    const double nv = l2_norm(v);
    if (nu == 0.0 || nv == 0.0) {
        throw Error(ErrorCode::InvalidArgument, "cosine_similarity: zero vector");
    }
    return dot(u, v) / (nu * nv);
}

std::vector<EmbeddingVector> EmbeddingProvider::embed_batch(std::span<const EmbedRequest> requests) const {
    std::vector<EmbeddingVector> out;
    out.reserve(requests.size());
    for (const auto& r : requests) out.push_back(embed(r));
    return out;
}

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t stable_hash(std::string_view data, std::uint64_t seed) {
    std::uint64_t h = 0xCBF29CE484222325ULL ^ mix64(seed);
    for (const char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return mix64(h);
}

HashingEmbedder::HashingEmbedder(std::size_t dimension, std::uint64_t seed)
    : dimension_(dimension), seed_(seed) {
    if (dimension < 2) throw Error(ErrorCode::InvalidArgument, "hashing embedder needs dimension >= 2");
}

std::pair<std::size_t, double> HashingEmbedder::bucket(std::string_view token) const {
    const auto h = stable_hash(token, seed_);
    return {static_cast<std::size_t>(h % dimension_), (h >> 63) != 0 ? -1.0 : 1.0};
}

EmbeddingVector HashingEmbedder::embed(const EmbedRequest& request) const {
    EmbeddingVector v(dimension_, 0.0);
    for (const auto& token : preprocess(request.text)) {
        const auto [index, sign] = bucket(token);
        v[index] += sign;
    }
    const double norm = l2_norm(v);
    if (norm == 0.0) {
        // No tokens, or all contributions cancelled.
        v.assign(dimension_, 0.0);
        v[0] = 1.0;
        return v;
    }
    for (auto& x : v) x /= norm;
    return v;
}

namespace {

template <typename T>
T parse_number(std::string_view s, const char* what) {
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw Error(ErrorCode::InvalidArgument, std::string("bad ") + what + " '" + std::string(s) + "'");
    }
    return value;
}

} // namespace

std::unique_ptr<EmbeddingProvider> make_provider(std::string_view spec) {
    const auto colon = spec.find(':');
    const auto kind = spec.substr(0, colon);
    const auto rest = colon == std::string_view::npos ? std::string_view{} : spec.substr(colon + 1);
    if (kind == "hash") {
        const auto sep = rest.find(':');
        if (sep == std::string_view::npos) {
            throw Error(ErrorCode::InvalidArgument, "provider spec must be hash:<dim>:<seed>");
        }
        const auto dim = parse_number<std::size_t>(rest.substr(0, sep), "dimension");
        const auto seed = parse_number<std::uint64_t>(rest.substr(sep + 1), "seed");
        return std::make_unique<HashingEmbedder>(dim, seed);
    }
    if (kind == "file") {
        if (rest.empty()) throw Error(ErrorCode::InvalidArgument, "provider spec must be file:<path>");
        return std::make_unique<FileVectorProvider>(read_vector_file(std::string(rest)));
    }
    if (kind == "http") {
        if (rest.empty()) throw Error(ErrorCode::InvalidArgument, "provider spec must be http:<url>");
        HttpEmbedderOptions options;
        // Both "http://host:port" and "http:http://host:port" are accepted.
        options.url = rest.starts_with("//") ? "http:" + std::string(rest) : std::string(rest);
        return std::make_unique<HttpEmbeddingClient>(options);
    }
    throw Error(ErrorCode::InvalidArgument,
                "unknown provider '" + std::string(spec) + "' (expected hash:, file: or http:)");
}

} // namespace causalir
