#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace causalir {

using EmbeddingVector = std::vector<double>;

double dot(std::span<const double> u, std::span<const double> v);
double l2_norm(std::span<const double> v);

/// U.V / (|U| |V|). Throws Dimension on length mismatch and
/// InvalidArgument when either vector is all zeros.
double cosine_similarity(std::span<const double> u, std::span<const double> v);

/// What to embed. `key` names the text for providers that serve
/// precomputed vectors (document id, or a query key such as the topic id);
/// computing providers only look at `text`.
struct EmbedRequest {
    std::string_view key;
    std::string_view text;
};

/// Maps text to fixed-dimension vectors. Implementations are deterministic
/// and safe to call concurrently.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;

    virtual std::size_t dimension() const = 0;
    virtual EmbeddingVector embed(const EmbedRequest& request) const = 0;
    virtual std::vector<EmbeddingVector> embed_batch(std::span<const EmbedRequest> requests) const;

    EmbeddingVector embed_text(std::string_view text) const { return embed({text, text}); }
};

/// Feature-hashing bag of preprocessed tokens, L2 normalized. Each token
/// lands in one of `dimension` buckets with a +/-1 sign. A text without
/// tokens maps to the first basis vector.
class HashingEmbedder final : public EmbeddingProvider {
public:
    HashingEmbedder(std::size_t dimension, std::uint64_t seed);

    std::size_t dimension() const override { return dimension_; }
    EmbeddingVector embed(const EmbedRequest& request) const override;

    /// Bucket and sign a token hashes to.
    std::pair<std::size_t, double> bucket(std::string_view token) const;

private:
    std::size_t dimension_;
    std::uint64_t seed_;
};

/// 64-bit FNV-1a followed by a splitmix64 finalizer; stable across platforms.
std::uint64_t stable_hash(std::string_view data, std::uint64_t seed);

/// splitmix64 step, also used to derive per-tree RNG seeds.
std::uint64_t mix64(std::uint64_t x);

/// Builds a provider from `hash:<dim>:<seed>`, `file:<path>` or `http:<url>`.
std::unique_ptr<EmbeddingProvider> make_provider(std::string_view spec);

} // namespace causalir
