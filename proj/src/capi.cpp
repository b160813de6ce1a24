#include "causalir/causalir.h"

#include "causalir/corpus.hpp"
#include "causalir/errors.hpp"
#include "causalir/evaluation.hpp"
#include "causalir/lexical_index.hpp"
#include "causalir/log.hpp"
#include "causalir/pipeline.hpp"
#include "causalir/semantic_index.hpp"
#include "causalir/text.hpp"
#include "causalir/vector_file.hpp"

#include <cstring>
#include <functional>
#include <memory>
#include <new>
#include <string>
#include <thread>

using namespace causalir;

struct cir_lexical_index {
    LexicalIndex index;
};

struct cir_semantic_index {
    std::unique_ptr<SemanticIndex> index;
};

struct cir_provider {
    std::unique_ptr<EmbeddingProvider> provider;
};

struct cir_config {
    PipelineConfig config;
};

struct cir_results {
    ResultSet results;
};

struct cir_evaluation {
    Evaluation eval;
};

namespace {

thread_local std::string t_last_error;

cir_status to_status(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidArgument: return CIR_ERR_INVALID_ARGUMENT;
    case ErrorCode::Io: return CIR_ERR_IO;
    case ErrorCode::Parse: return CIR_ERR_PARSE;
    case ErrorCode::Format: return CIR_ERR_FORMAT;
    case ErrorCode::Dimension: return CIR_ERR_DIMENSION;
    case ErrorCode::NotFound: return CIR_ERR_NOT_FOUND;
    case ErrorCode::Network: return CIR_ERR_NETWORK;
    case ErrorCode::Internal: return CIR_ERR_INTERNAL;
    }
    return CIR_ERR_INTERNAL;
}

template <typename F>
cir_status guarded(F&& fn) {
    t_last_error.clear();
    try {
        fn();
        return CIR_OK;
    } catch (const Error& e) {
        t_last_error = e.what();
        return to_status(e.code());
    } catch (const std::bad_alloc&) {
        t_last_error = "out of memory";
    } catch (const std::exception& e) {
        t_last_error = e.what();
    } catch (...) {
        t_last_error = "unknown error";
    }
    return CIR_ERR_INTERNAL;
}

void require(const void* p, const char* what) {
    if (p == nullptr) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must not be NULL");
}

CorpusFormat corpus_format(cir_corpus_format format) {
    switch (format) {
    case CIR_CORPUS_JSONL: return CorpusFormat::JsonLines;
    case CIR_CORPUS_TREC: return CorpusFormat::TrecSgml;
    }
    throw Error(ErrorCode::InvalidArgument, "unknown corpus format");
}

Indexes indexes_of(const cir_lexical_index* lexical, const cir_semantic_index* semantic) {
    return Indexes{lexical ? &lexical->index : nullptr, semantic ? semantic->index.get() : nullptr};
}

void write_topics_run(const char* topics_path, const char* run_tag, const char* out_run_path,
                      std::size_t threads, const std::function<ResultSet(const Topic&)>& fn) {
    require(topics_path, "topics_path");
    require(out_run_path, "out_run_path");
    const auto topics = load_topics(topics_path);
    const auto results = run_topics(topics, fn, threads);
    write_run(std::filesystem::path(out_run_path),
              RunFile::from_results(results, run_tag && *run_tag ? run_tag : "causalir"));
}

} // namespace

extern "C" {

const char* cir_version(void) { return "1.0.0"; }
uint32_t cir_lexical_format_version(void) { return LexicalIndex::kFormatVersion; }
uint32_t cir_store_format_version(void) { return VectorStore::kFormatVersion; }
uint32_t cir_forest_format_version(void) { return AnnForest::kFormatVersion; }

const char* cir_last_error(void) { return t_last_error.c_str(); }

const char* cir_status_name(cir_status status) {
    switch (status) {
    case CIR_OK: return "ok";
    case CIR_ERR_INVALID_ARGUMENT: return "invalid argument";
    case CIR_ERR_IO: return "i/o error";
    case CIR_ERR_PARSE: return "parse error";
    case CIR_ERR_FORMAT: return "format error";
    case CIR_ERR_DIMENSION: return "dimension mismatch";
    case CIR_ERR_NOT_FOUND: return "not found";
    case CIR_ERR_NETWORK: return "network error";
    case CIR_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

void cir_set_log_level(cir_log_level level) { set_log_level(static_cast<LogLevel>(level)); }

cir_status cir_lexical_index_build(const char* corpus_path, cir_corpus_format format, int strict,
                                   cir_lexical_index** out) {
    return guarded([&] {
        require(corpus_path, "corpus_path");
        require(out, "out");
        CorpusReader reader(corpus_path, corpus_format(format), LoadOptions{strict != 0});
        LexicalIndex::Builder builder;
        while (auto doc = reader.next()) builder.add(tokenize(*doc));
        *out = new cir_lexical_index{std::move(builder).finish()};
    });
}

cir_status cir_lexical_index_save(const cir_lexical_index* index, const char* path) {
    return guarded([&] {
        require(index, "index");
        require(path, "path");
        index->index.save(std::filesystem::path(path));
    });
}

cir_status cir_lexical_index_load(const char* path, cir_lexical_index** out) {
    return guarded([&] {
        require(path, "path");
        require(out, "out");
        *out = new cir_lexical_index{LexicalIndex::load(std::filesystem::path(path))};
    });
}

void cir_lexical_index_free(cir_lexical_index* index) { delete index; }

size_t cir_lexical_index_num_docs(const cir_lexical_index* index) { return index ? index->index.num_docs() : 0; }
size_t cir_lexical_index_num_terms(const cir_lexical_index* index) { return index ? index->index.num_terms() : 0; }
uint64_t cir_lexical_index_num_tokens(const cir_lexical_index* index) {
    return index ? index->index.total_tokens() : 0;
}

cir_status cir_lexical_search(const cir_lexical_index* index, const char* query, double k1, double b, size_t k,
                              cir_results** out) {
    return guarded([&] {
        require(index, "index");
        require(query, "query");
        require(out, "out");
        const auto tokens = preprocess(query);
        *out = new cir_results{index->index.search(Bm25Params{k1, b}, tokens, k)};
    });
}

cir_status cir_provider_create(const char* spec, cir_provider** out) {
    return guarded([&] {
        require(spec, "spec");
        require(out, "out");
        *out = new cir_provider{make_provider(spec)};
    });
}

void cir_provider_free(cir_provider* provider) { delete provider; }

cir_status cir_provider_dimension(const cir_provider* provider, size_t* out) {
    return guarded([&] {
        require(provider, "provider");
        require(out, "out");
        *out = provider->provider->dimension();
    });
}

cir_status cir_provider_embed(const cir_provider* provider, const char* key, const char* text, double* out,
                              size_t capacity) {
    return guarded([&] {
        require(provider, "provider");
        require(text, "text");
        require(out, "out");
        const auto v = provider->provider->embed(EmbedRequest{key ? key : text, text});
        if (v.size() > capacity) {
            throw Error(ErrorCode::InvalidArgument, "output buffer holds " + std::to_string(capacity) +
                                                        " values, vector has " + std::to_string(v.size()));
        }
        std::memcpy(out, v.data(), v.size() * sizeof(double));
    });
}

cir_status cir_embed_corpus(const char* corpus_path, cir_corpus_format format, int strict,
                            const cir_provider* provider, const char* out_path, cir_vector_format vector_format,
                            size_t* count) {
    return guarded([&] {
        require(corpus_path, "corpus_path");
        require(provider, "provider");
        require(out_path, "out_path");
        const auto docs = load_corpus(corpus_path, corpus_format(format), LoadOptions{strict != 0});
        std::vector<std::string> texts;
        std::vector<EmbedRequest> requests;
        texts.reserve(docs.size());
        for (const auto& doc : docs) texts.push_back(doc.indexable_text());
        requests.reserve(docs.size());
        for (std::size_t i = 0; i < docs.size(); ++i) requests.push_back(EmbedRequest{docs[i].doc_id, texts[i]});
        const auto vectors = provider->provider->embed_batch(requests);
        VectorRecords records;
        records.dimension = provider->provider->dimension();
        for (std::size_t i = 0; i < docs.size(); ++i) records.append(docs[i].doc_id, vectors[i]);
        write_vector_file(out_path, records,
                          vector_format == CIR_VECTORS_BINARY ? VectorFileFormat::Binary : VectorFileFormat::Text);
        if (count) *count = records.size();
    });
}

cir_status cir_semantic_index_build(const char* vector_path, size_t num_trees, size_t leaf_capacity, uint64_t seed,
                                    size_t threads, cir_semantic_index** out) {
    return guarded([&] {
        require(vector_path, "vector_path");
        require(out, "out");
        VectorStore store(read_vector_file(vector_path));
        std::optional<AnnForest> forest;
        if (num_trees > 0) {
            ForestParams params;
            params.num_trees = num_trees;
            if (leaf_capacity > 0) params.leaf_capacity = leaf_capacity;
            params.seed = seed;
            forest = AnnForest::build(store, params, threads == 0 ? std::thread::hardware_concurrency() : threads);
        }
        *out = new cir_semantic_index{std::make_unique<SemanticIndex>(std::move(store), std::move(forest))};
    });
}

cir_status cir_semantic_index_save(const cir_semantic_index* index, const char* store_path, const char* forest_path) {
    return guarded([&] {
        require(index, "index");
        require(store_path, "store_path");
        index->index->store().save(std::filesystem::path(store_path));
        if (forest_path != nullptr) {
            if (index->index->forest() == nullptr) {
                throw Error(ErrorCode::InvalidArgument, "index has no forest to save");
            }
            index->index->forest()->save(std::filesystem::path(forest_path));
        }
    });
}

cir_status cir_semantic_index_load(const char* store_path, const char* forest_path, cir_semantic_index** out) {
    return guarded([&] {
        require(store_path, "store_path");
        require(out, "out");
        auto store = VectorStore::load(std::filesystem::path(store_path));
        std::optional<AnnForest> forest;
        if (forest_path != nullptr) forest = AnnForest::load(std::filesystem::path(forest_path));
        *out = new cir_semantic_index{std::make_unique<SemanticIndex>(std::move(store), std::move(forest))};
    });
}

void cir_semantic_index_free(cir_semantic_index* index) { delete index; }

size_t cir_semantic_index_size(const cir_semantic_index* index) { return index ? index->index->store().size() : 0; }
size_t cir_semantic_index_dimension(const cir_semantic_index* index) { return index ? index->index->dimension() : 0; }
int cir_semantic_index_has_forest(const cir_semantic_index* index) {
    return index && index->index->forest() != nullptr ? 1 : 0;
}

cir_status cir_semantic_search(const cir_semantic_index* index, const cir_provider* provider, const char* text,
                               size_t k, const char* mode, size_t budget, cir_results** out) {
    return guarded([&] {
        require(index, "index");
        require(provider, "provider");
        require(text, "text");
        require(out, "out");
        SemanticSearchOptions options;
        options.mode = parse_semantic_mode(mode ? mode : "auto");
        options.search_budget = budget;
        const auto query = provider->provider->embed_text(text);
        *out = new cir_results{index->index->search(query, k, options)};
    });
}

cir_status cir_config_create(cir_config** out) {
    return guarded([&] {
        require(out, "out");
        *out = new cir_config{};
    });
}

cir_status cir_config_load(const char* path, cir_config* config) {
    return guarded([&] {
        require(path, "path");
        require(config, "config");
        config->config.apply_file(path);
    });
}

cir_status cir_config_set(cir_config* config, const char* key, const char* value) {
    return guarded([&] {
        require(config, "config");
        require(key, "key");
        require(value, "value");
        config->config.set(key, value);
    });
}

void cir_config_free(cir_config* config) { delete config; }

cir_status cir_run_topics(const char* topics_path, const cir_lexical_index* lexical,
                          const cir_semantic_index* semantic, const cir_provider* provider, const cir_config* config,
                          const char* run_tag, const char* out_run_path) {
    return guarded([&] {
        const PipelineConfig cfg = config ? config->config : PipelineConfig{};
        cfg.validate();
        const auto indexes = indexes_of(lexical, semantic);
        const EmbeddingProvider* p = provider ? provider->provider.get() : nullptr;
        write_topics_run(topics_path, run_tag, out_run_path, cfg.threads,
                         [&](const Topic& topic) { return run_pipeline(topic, indexes, p, cfg); });
    });
}

cir_status cir_run_baseline(const char* baseline, const char* topics_path, const cir_lexical_index* lexical,
                            const cir_semantic_index* semantic, const cir_provider* provider, const cir_config* config,
                            const char* run_tag, const char* out_run_path) {
    return guarded([&] {
        require(baseline, "baseline");
        const auto which = parse_baseline(baseline);
        const PipelineConfig cfg = config ? config->config : PipelineConfig{};
        cfg.validate();
        const auto indexes = indexes_of(lexical, semantic);
        const EmbeddingProvider* p = provider ? provider->provider.get() : nullptr;
        write_topics_run(topics_path, run_tag, out_run_path, cfg.threads,
                         [&](const Topic& topic) { return run_baseline(which, topic, indexes, p, cfg); });
    });
}

size_t cir_results_count(const cir_results* results) { return results ? results->results.hits.size() : 0; }

const char* cir_results_doc_id(const cir_results* results, size_t i) {
    if (results == nullptr || i >= results->results.hits.size()) return nullptr;
    return results->results.hits[i].doc_id.c_str();
}

double cir_results_score(const cir_results* results, size_t i) {
    if (results == nullptr || i >= results->results.hits.size()) return 0.0;
    return results->results.hits[i].score;
}

void cir_results_free(cir_results* results) { delete results; }

cir_status cir_evaluate(const char* run_path, const char* qrels_path, cir_evaluation** out) {
    return guarded([&] {
        require(run_path, "run_path");
        require(qrels_path, "qrels_path");
        require(out, "out");
        const auto qrels = Qrels::read(std::filesystem::path(qrels_path));
        const auto run = read_run(std::filesystem::path(run_path));
        *out = new cir_evaluation{evaluate(run, qrels)};
    });
}

double cir_evaluation_map(const cir_evaluation* eval) { return eval ? eval->eval.map : 0.0; }
double cir_evaluation_p5(const cir_evaluation* eval) { return eval ? eval->eval.precision_at_5 : 0.0; }
size_t cir_evaluation_num_topics(const cir_evaluation* eval) { return eval ? eval->eval.per_topic.size() : 0; }

const char* cir_evaluation_topic_id(const cir_evaluation* eval, size_t i) {
    if (eval == nullptr || i >= eval->eval.per_topic.size()) return nullptr;
    return eval->eval.per_topic[i].topic_id.c_str();
}

double cir_evaluation_topic_ap(const cir_evaluation* eval, size_t i) {
    if (eval == nullptr || i >= eval->eval.per_topic.size()) return 0.0;
    return eval->eval.per_topic[i].average_precision;
}

double cir_evaluation_topic_p5(const cir_evaluation* eval, size_t i) {
    if (eval == nullptr || i >= eval->eval.per_topic.size()) return 0.0;
    return eval->eval.per_topic[i].precision_at_5;
}

void cir_evaluation_free(cir_evaluation* eval) { delete eval; }

} // extern "C"
