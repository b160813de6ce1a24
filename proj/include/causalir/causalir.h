/* C interface to the causalir retrieval engine.
 *
 * Every function returns a cir_status. On failure, cir_last_error() returns
 * a message for the calling thread that stays valid until that thread's
 * next API call. Objects are opaque handles released with the matching
 * *_free function; passing NULL to *_free is a no-op.
 */
#ifndef CAUSALIR_H
#define CAUSALIR_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define CIR_API __declspec(dllexport)
#else
#define CIR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum cir_status {
    CIR_OK = 0,
    CIR_ERR_INVALID_ARGUMENT = 1,
    CIR_ERR_IO = 2,
    CIR_ERR_PARSE = 3,
    CIR_ERR_FORMAT = 4,
    CIR_ERR_DIMENSION = 5,
    CIR_ERR_NOT_FOUND = 6,
    CIR_ERR_NETWORK = 7,
    CIR_ERR_INTERNAL = 8
} cir_status;

typedef enum cir_corpus_format { CIR_CORPUS_JSONL = 0, CIR_CORPUS_TREC = 1 } cir_corpus_format;

typedef enum cir_vector_format { CIR_VECTORS_TEXT = 0, CIR_VECTORS_BINARY = 1 } cir_vector_format;

typedef enum cir_log_level { CIR_LOG_ERROR = 0, CIR_LOG_WARN = 1, CIR_LOG_INFO = 2, CIR_LOG_DEBUG = 3 } cir_log_level;

typedef struct cir_lexical_index cir_lexical_index;
typedef struct cir_semantic_index cir_semantic_index;
typedef struct cir_provider cir_provider;
typedef struct cir_config cir_config;
typedef struct cir_results cir_results;
typedef struct cir_evaluation cir_evaluation;

/* Library and snapshot format versions. */
CIR_API const char* cir_version(void);
CIR_API uint32_t cir_lexical_format_version(void);
CIR_API uint32_t cir_store_format_version(void);
CIR_API uint32_t cir_forest_format_version(void);

CIR_API const char* cir_last_error(void);
CIR_API const char* cir_status_name(cir_status status);
CIR_API void cir_set_log_level(cir_log_level level);

/* Lexical index. */
CIR_API cir_status cir_lexical_index_build(const char* corpus_path, cir_corpus_format format, int strict,
                                           cir_lexical_index** out);
CIR_API cir_status cir_lexical_index_save(const cir_lexical_index* index, const char* path);
CIR_API cir_status cir_lexical_index_load(const char* path, cir_lexical_index** out);
CIR_API void cir_lexical_index_free(cir_lexical_index* index);
CIR_API size_t cir_lexical_index_num_docs(const cir_lexical_index* index);
CIR_API size_t cir_lexical_index_num_terms(const cir_lexical_index* index);
CIR_API uint64_t cir_lexical_index_num_tokens(const cir_lexical_index* index);
/* BM25 search of preprocessed `query` text. */
CIR_API cir_status cir_lexical_search(const cir_lexical_index* index, const char* query, double k1, double b,
                                      size_t k, cir_results** out);

/* Embedding providers: "hash:<dim>:<seed>", "file:<path>" or "http:<url>". */
CIR_API cir_status cir_provider_create(const char* spec, cir_provider** out);
CIR_API void cir_provider_free(cir_provider* provider);
CIR_API cir_status cir_provider_dimension(const cir_provider* provider, size_t* out);
/* Embeds `text` (looked up by `key` for file providers; key may be NULL). */
CIR_API cir_status cir_provider_embed(const cir_provider* provider, const char* key, const char* text,
                                      double* out, size_t capacity);

/* Embeds every corpus document and writes a vector file; *count receives
 * the number of vectors written (may be NULL). */
CIR_API cir_status cir_embed_corpus(const char* corpus_path, cir_corpus_format format, int strict,
                                    const cir_provider* provider, const char* out_path,
                                    cir_vector_format vector_format, size_t* count);

/* Semantic index: vector store plus optional ANN forest (num_trees 0 = none). */
CIR_API cir_status cir_semantic_index_build(const char* vector_path, size_t num_trees, size_t leaf_capacity,
                                            uint64_t seed, size_t threads, cir_semantic_index** out);
/* forest_path may be NULL. */
CIR_API cir_status cir_semantic_index_save(const cir_semantic_index* index, const char* store_path,
                                           const char* forest_path);
CIR_API cir_status cir_semantic_index_load(const char* store_path, const char* forest_path,
                                           cir_semantic_index** out);
CIR_API void cir_semantic_index_free(cir_semantic_index* index);
CIR_API size_t cir_semantic_index_size(const cir_semantic_index* index);
CIR_API size_t cir_semantic_index_dimension(const cir_semantic_index* index);
CIR_API int cir_semantic_index_has_forest(const cir_semantic_index* index);
/* mode: "auto", "exact" or "ann"; budget 0 = default. */
CIR_API cir_status cir_semantic_search(const cir_semantic_index* index, const cir_provider* provider,
                                       const char* text, size_t k, const char* mode, size_t budget,
                                       cir_results** out);

/* Pipeline configuration (key = value settings, see README). */
CIR_API cir_status cir_config_create(cir_config** out);
CIR_API cir_status cir_config_load(const char* path, cir_config* config);
CIR_API cir_status cir_config_set(cir_config* config, const char* key, const char* value);
CIR_API void cir_config_free(cir_config* config);

/* Runs the hybrid pipeline over a topics file and writes a TREC run.
 * Either index may be NULL when the configured strategies do not use it;
 * provider may be NULL when Q1 is disabled. */
CIR_API cir_status cir_run_topics(const char* topics_path, const cir_lexical_index* lexical,
                                  const cir_semantic_index* semantic, const cir_provider* provider,
                                  const cir_config* config, const char* run_tag, const char* out_run_path);

/* baseline: narrative-bm25, query-bm25, query+narrative-semantic, query-semantic. */
CIR_API cir_status cir_run_baseline(const char* baseline, const char* topics_path,
                                    const cir_lexical_index* lexical, const cir_semantic_index* semantic,
                                    const cir_provider* provider, const cir_config* config, const char* run_tag,
                                    const char* out_run_path);

/* Ranked results. */
CIR_API size_t cir_results_count(const cir_results* results);
CIR_API const char* cir_results_doc_id(const cir_results* results, size_t i);
CIR_API double cir_results_score(const cir_results* results, size_t i);
CIR_API void cir_results_free(cir_results* results);

/* MAP and P@5 of a run file against qrels. */
CIR_API cir_status cir_evaluate(const char* run_path, const char* qrels_path, cir_evaluation** out);
CIR_API double cir_evaluation_map(const cir_evaluation* eval);
CIR_API double cir_evaluation_p5(const cir_evaluation* eval);
CIR_API size_t cir_evaluation_num_topics(const cir_evaluation* eval);
CIR_API const char* cir_evaluation_topic_id(const cir_evaluation* eval, size_t i);
CIR_API double cir_evaluation_topic_ap(const cir_evaluation* eval, size_t i);
CIR_API double cir_evaluation_topic_p5(const cir_evaluation* eval, size_t i);
CIR_API void cir_evaluation_free(cir_evaluation* eval);

#ifdef __cplusplus
}
#endif

#endif /* CAUSALIR_H */
