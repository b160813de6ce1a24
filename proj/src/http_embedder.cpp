#include "causalir/http_embedder.hpp"

#include "causalir/errors.hpp"
#include "causalir/log.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cmath>
#include <future>
#include <thread>

namespace causalir {

namespace {

std::string truncate_utf8(std::string_view text, std::size_t max_bytes) {
    if (max_bytes == 0 || text.size() <= max_bytes) return std::string(text);
    std::size_t cut = max_bytes;
    while (cut > 0 && (static_cast<unsigned char>(text[cut]) & 0xC0) == 0x80) --cut;
    return std::string(text.substr(0, cut));
}

bool is_transient(int status) { return status == 429 || status >= 500; }

} // namespace

HttpEmbeddingClient::HttpEmbeddingClient(HttpEmbedderOptions options)
    : options_(std::move(options)), dimension_(options_.dimension) {
    const std::string_view url = options_.url;
    if (!url.starts_with("http://")) {
        throw Error(ErrorCode::InvalidArgument, "embedding service URL must start with http:// (got '" +
                                                    options_.url + "')");
    }
    const auto slash = url.find('/', 7);
    base_ = std::string(url.substr(0, slash));
    std::string prefix = slash == std::string_view::npos ? std::string() : std::string(url.substr(slash));
    while (!prefix.empty() && prefix.back() == '/') prefix.pop_back();
    path_ = prefix.ends_with("/embed") ? prefix : prefix + "/embed";
    if (options_.batch_size == 0) options_.batch_size = 1;
    if (options_.max_attempts == 0) options_.max_attempts = 1;
    if (options_.max_in_flight == 0) options_.max_in_flight = 1;
}

void HttpEmbeddingClient::check_dimension(std::size_t found, const std::string& context) const {
    std::lock_guard lock(dim_mutex_);
    if (dimension_ == 0) {
        dimension_ = found;
        return;
    }
    if (found != dimension_) {
        throw Error(ErrorCode::Dimension, context + ": service returned dimension " + std::to_string(found) +
                                              ", expected " + std::to_string(dimension_));
    }
}

std::size_t HttpEmbeddingClient::dimension() const {
    {
        std::lock_guard lock(dim_mutex_);
        if (dimension_ != 0) return dimension_;
    }
    post_batch({"dimension probe"}, 0);
    std::lock_guard lock(dim_mutex_);
    return dimension_;
}

std::vector<EmbeddingVector> HttpEmbeddingClient::post_batch(const std::vector<std::string>& texts,
                                                             std::size_t first_index) const {
    using nlohmann::json;
    const std::string context = "POST " + base_ + path_ + " (" + std::to_string(texts.size()) +
                                " texts from index " + std::to_string(first_index) + ")";
    json payload;
    payload["texts"] = texts;
    const std::string body = payload.dump();

    std::string last_failure;
    for (std::size_t attempt = 1; attempt <= options_.max_attempts; ++attempt) {
        httplib::Client client(base_);
        const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
        const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - secs);
        client.set_connection_timeout(secs.count(), usecs.count());
        client.set_read_timeout(secs.count(), usecs.count());
        client.set_write_timeout(secs.count(), usecs.count());
        ++requests_sent_;
        const auto res = client.Post(path_, body, "application/json");

        if (res && res->status >= 200 && res->status < 300) {
            json reply;
            try {
                reply = json::parse(res->body);
            } catch (const json::exception& e) {
                throw Error(ErrorCode::Parse, context + ": invalid JSON reply: " + e.what());
            }
            const auto it = reply.find("vectors");
            if (it == reply.end() || !it->is_array()) {
                throw Error(ErrorCode::Parse, context + ": reply lacks a 'vectors' array");
            }
            if (it->size() != texts.size()) {
                throw Error(ErrorCode::Parse, context + ": expected " + std::to_string(texts.size()) +
                                                  " vectors, got " + std::to_string(it->size()));
            }
            std::vector<EmbeddingVector> out;
            out.reserve(texts.size());
            for (const auto& row : *it) {
                if (!row.is_array()) throw Error(ErrorCode::Parse, context + ": vector is not an array");
                check_dimension(row.size(), context);
                EmbeddingVector v;
                v.reserve(row.size());
                for (const auto& x : row) {
                    if (!x.is_number() || !std::isfinite(x.get<double>())) {
                        throw Error(ErrorCode::Parse, context + ": non-numeric or non-finite value");
                    }
                    v.push_back(x.get<double>());
                }
                out.push_back(std::move(v));
            }
            return out;
        }

        if (res && !is_transient(res->status)) {
            throw Error(ErrorCode::Network, context + ": HTTP " + std::to_string(res->status) + ": " +
                                                res->body.substr(0, 200));
        }
        last_failure = res ? "HTTP " + std::to_string(res->status) : httplib::to_string(res.error());
        if (attempt < options_.max_attempts) {
            const auto delay = options_.initial_backoff * (1LL << (attempt - 1));
            log_warn(context + ": " + last_failure + ", retrying in " + std::to_string(delay.count()) + " ms");
            std::this_thread::sleep_for(delay);
        }
    }
    throw Error(ErrorCode::Network, context + ": failed after " + std::to_string(options_.max_attempts) +
                                        " attempts: " + last_failure);
}

EmbeddingVector HttpEmbeddingClient::embed(const EmbedRequest& request) const {
    return std::move(embed_batch(std::span(&request, 1)).front());
}

std::vector<EmbeddingVector> HttpEmbeddingClient::embed_batch(std::span<const EmbedRequest> requests) const {
    std::vector<EmbeddingVector> out(requests.size());
    const std::size_t num_batches = (requests.size() + options_.batch_size - 1) / options_.batch_size;
    for (std::size_t wave = 0; wave < num_batches; wave += options_.max_in_flight) {
        std::vector<std::future<void>> pending;
        for (std::size_t b = wave; b < std::min(num_batches, wave + options_.max_in_flight); ++b) {
            pending.push_back(std::async(std::launch::async, [&, b] {
                const std::size_t first = b * options_.batch_size;
                const std::size_t last = std::min(requests.size(), first + options_.batch_size);
                std::vector<std::string> texts;
                for (std::size_t i = first; i < last; ++i) {
                    texts.push_back(truncate_utf8(requests[i].text, options_.max_chars));
                }
                auto vectors = post_batch(texts, first);
                for (std::size_t i = first; i < last; ++i) out[i] = std::move(vectors[i - first]);
            }));
        }
        // get() on every future before rethrowing so no task outlives `out`.
        std::exception_ptr failure;
        for (auto& f : pending) {
            try {
                f.get();
            } catch (...) {
                if (!failure) failure = std::current_exception();
            }
        }
        if (failure) std::rethrow_exception(failure);
    }
    return out;
}

} // namespace causalir
