#pragma once

#include "causalir/embedding.hpp"

#include <atomic>
#include <chrono>
#include <cstddef>
#include <mutex>
#include <string>

namespace causalir {

struct HttpEmbedderOptions {
    /// Service base URL, e.g. http://localhost:8080. Requests go to <url>/embed.
    std::string url;
    std::chrono::milliseconds timeout{30'000};
    std::size_t batch_size = 32;
    /// Total attempts per batch, including the first.
    std::size_t max_attempts = 4;
    std::chrono::milliseconds initial_backoff{100};
    /// Upper bound on concurrently outstanding batches.
    std::size_t max_in_flight = 4;
    /// Truncate each text to this many bytes (at a UTF-8 boundary); 0 = off.
    std::size_t max_chars = 0;
    /// Expected dimension; 0 means learn it from the first response.
    std::size_t dimension = 0;
};

/// Client for an embedding service speaking
///   POST /embed {"texts": [...]}  ->  {"vectors": [[...], ...]}
/// Connection failures, 429 and 5xx responses are retried with exponential
/// backoff; other non-2xx responses fail immediately.
class HttpEmbeddingClient final : public EmbeddingProvider {
public:
    explicit HttpEmbeddingClient(HttpEmbedderOptions options);

    /// May issue a probe request when the dimension is not yet known.
    std::size_t dimension() const override;
    EmbeddingVector embed(const EmbedRequest& request) const override;
    std::vector<EmbeddingVector> embed_batch(std::span<const EmbedRequest> requests) const override;

    /// Number of HTTP requests issued so far, retries included.
    std::size_t requests_sent() const { return requests_sent_.load(); }

private:
    std::vector<EmbeddingVector> post_batch(const std::vector<std::string>& texts,
                                            std::size_t first_index) const;
    void check_dimension(std::size_t found, const std::string& context) const;

    HttpEmbedderOptions options_;
    std::string base_;
    std::string path_;
    mutable std::mutex dim_mutex_;
    mutable std::size_t dimension_;
    mutable std::atomic<std::size_t> requests_sent_{0};
};

} // namespace causalir
