#include "causalir/causalir.h"

#include "test_util.hpp"

#include <doctest.h>

#include <cstring>
#include <string>
#include <vector>

#ifndef CAUSALIR_TEST_DATA
#error "CAUSALIR_TEST_DATA must point at tests/data"
#endif

namespace {

const std::string kFixture = CAUSALIR_TEST_DATA "/cli";

} // namespace

TEST_CASE("status reporting") {
    CHECK(std::strcmp(cir_status_name(CIR_OK), "ok") == 0);
    CHECK(cir_lexical_format_version() == 1);
    CHECK(std::strlen(cir_version()) > 0);

    cir_lexical_index* index = nullptr;
    CHECK(cir_lexical_index_load("/no/such/file", &index) == CIR_ERR_IO);
    CHECK(index == nullptr);
    CHECK(std::string(cir_last_error()).find("/no/such/file") != std::string::npos);
    CHECK(cir_lexical_index_load(nullptr, &index) == CIR_ERR_INVALID_ARGUMENT);

    cir_provider* provider = nullptr;
    CHECK(cir_provider_create("hash:8:1", &provider) == CIR_OK);
    CHECK(std::string(cir_last_error()).empty());
    cir_provider_free(provider);
    CHECK(cir_provider_create("bogus", &provider) == CIR_ERR_INVALID_ARGUMENT);
}

TEST_CASE("end to end through the C API") {
    cir_set_log_level(CIR_LOG_ERROR);
    testutil::TempDir dir;
    const std::string corpus = kFixture + "/corpus.jsonl";

    cir_lexical_index* lexical = nullptr;
    REQUIRE(cir_lexical_index_build(corpus.c_str(), CIR_CORPUS_JSONL, 1, &lexical) == CIR_OK);
    CHECK(cir_lexical_index_num_docs(lexical) == 8);
    const std::string lex_path = dir.file("lex.idx").string();
    REQUIRE(cir_lexical_index_save(lexical, lex_path.c_str()) == CIR_OK);
    cir_lexical_index* lexical2 = nullptr;
    REQUIRE(cir_lexical_index_load(lex_path.c_str(), &lexical2) == CIR_OK);
    CHECK(cir_lexical_index_num_terms(lexical2) == cir_lexical_index_num_terms(lexical));
    CHECK(cir_lexical_index_num_tokens(lexical2) == cir_lexical_index_num_tokens(lexical));

    cir_results* hits = nullptr;
    REQUIRE(cir_lexical_search(lexical2, "Tharoor resigned", 1.5, 0.75, 3, &hits) == CIR_OK);
    REQUIRE(cir_results_count(hits) >= 1);
    CHECK(std::string(cir_results_doc_id(hits, 0)) == "d1");
    CHECK(cir_results_score(hits, 0) > 0.0);
    CHECK(cir_results_doc_id(hits, 99) == nullptr);
    cir_results_free(hits);
    CHECK(cir_lexical_search(lexical2, "x", -1.0, 0.75, 3, &hits) == CIR_ERR_INVALID_ARGUMENT);

    cir_provider* provider = nullptr;
    REQUIRE(cir_provider_create("hash:32:4", &provider) == CIR_OK);
    std::size_t dim = 0;
    REQUIRE(cir_provider_dimension(provider, &dim) == CIR_OK);
    CHECK(dim == 32);
    std::vector<double> v(32);
    CHECK(cir_provider_embed(provider, nullptr, "flood", v.data(), v.size()) == CIR_OK);
    CHECK(cir_provider_embed(provider, nullptr, "flood", v.data(), 3) == CIR_ERR_INVALID_ARGUMENT);

    for (const auto format : {CIR_VECTORS_TEXT, CIR_VECTORS_BINARY}) {
        const std::string vec_path = dir.file(format == CIR_VECTORS_TEXT ? "v.txt" : "v.bin").string();
        std::size_t count = 0;
        REQUIRE(cir_embed_corpus(corpus.c_str(), CIR_CORPUS_JSONL, 0, provider, vec_path.c_str(), format, &count) ==
                CIR_OK);
        CHECK(count == 8);

        cir_semantic_index* semantic = nullptr;
        REQUIRE(cir_semantic_index_build(vec_path.c_str(), 4, 2, 9, 2, &semantic) == CIR_OK);
        CHECK(cir_semantic_index_size(semantic) == 8);
        CHECK(cir_semantic_index_dimension(semantic) == 32);
        CHECK(cir_semantic_index_has_forest(semantic) == 1);
        const std::string store = dir.file("s.bin").string();
        const std::string forest = dir.file("f.bin").string();
        REQUIRE(cir_semantic_index_save(semantic, store.c_str(), forest.c_str()) == CIR_OK);
        cir_semantic_index* loaded = nullptr;
        REQUIRE(cir_semantic_index_load(store.c_str(), forest.c_str(), &loaded) == CIR_OK);

        const char* text = "Flooding in Assam displaced thousands after the Brahmaputra breached embankments.";
        cir_results* exact = nullptr;
        cir_results* ann = nullptr;
        REQUIRE(cir_semantic_search(loaded, provider, text, 3, "exact", 0, &exact) == CIR_OK);
        REQUIRE(cir_semantic_search(loaded, provider, text, 3, "ann", 8, &ann) == CIR_OK);
        CHECK(std::string(cir_results_doc_id(exact, 0)) == "d4");
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(std::string(cir_results_doc_id(exact, i)) == cir_results_doc_id(ann, i));
            CHECK(cir_results_score(exact, i) == cir_results_score(ann, i));
        }
        CHECK(cir_semantic_search(loaded, provider, text, 3, "sideways", 0, &ann) == CIR_ERR_INVALID_ARGUMENT);
        cir_results_free(exact);
        cir_results_free(ann);

        cir_config* config = nullptr;
        REQUIRE(cir_config_create(&config) == CIR_OK);
        REQUIRE(cir_config_load((kFixture + "/pipeline.conf").c_str(), config) == CIR_OK);
        CHECK(cir_config_set(config, "threads", "2") == CIR_OK);
        CHECK(cir_config_set(config, "nonsense", "2") == CIR_ERR_INVALID_ARGUMENT);

        const std::string topics = kFixture + "/topics.jsonl";
        const std::string run_a = dir.file("a.run").string();
        const std::string run_b = dir.file("b.run").string();
        REQUIRE(cir_run_topics(topics.c_str(), lexical2, loaded, provider, config, "capi", run_a.c_str()) == CIR_OK);
        REQUIRE(cir_run_topics(topics.c_str(), lexical2, loaded, provider, config, "capi", run_b.c_str()) == CIR_OK);
        CHECK(testutil::slurp(run_a) == testutil::slurp(run_b));
        CHECK(testutil::slurp(run_a).find(" capi\n") != std::string::npos);

        const std::string base = dir.file("base.run").string();
        CHECK(cir_run_baseline("query+narrative-semantic", topics.c_str(), lexical2, loaded, provider, config, nullptr,
                               base.c_str()) == CIR_OK);
        CHECK(cir_run_baseline("nope", topics.c_str(), lexical2, loaded, provider, config, nullptr, base.c_str()) ==
              CIR_ERR_INVALID_ARGUMENT);
        // Q1 without a provider fails the run unless lenient.
        CHECK(cir_run_topics(topics.c_str(), lexical2, loaded, nullptr, config, nullptr, base.c_str()) ==
              CIR_ERR_INVALID_ARGUMENT);
        CHECK(std::string(cir_last_error()).find("Q1") != std::string::npos);
        CHECK(cir_config_set(config, "lenient", "true") == CIR_OK);
        CHECK(cir_run_topics(topics.c_str(), lexical2, loaded, nullptr, config, nullptr, base.c_str()) == CIR_OK);

        cir_evaluation* eval = nullptr;
        REQUIRE(cir_evaluate(run_a.c_str(), (kFixture + "/qrels.txt").c_str(), &eval) == CIR_OK);
        CHECK(cir_evaluation_num_topics(eval) == 2);
        CHECK(std::string(cir_evaluation_topic_id(eval, 0)) == "201");
        CHECK(cir_evaluation_map(eval) ==
              doctest::Approx((cir_evaluation_topic_ap(eval, 0) + cir_evaluation_topic_ap(eval, 1)) / 2.0));
        CHECK(cir_evaluation_p5(eval) ==
              doctest::Approx((cir_evaluation_topic_p5(eval, 0) + cir_evaluation_topic_p5(eval, 1)) / 2.0));
        cir_evaluation_free(eval);

        cir_config_free(config);
        cir_semantic_index_free(loaded);
        cir_semantic_index_free(semantic);
    }

    cir_evaluation* eval = nullptr;
    CHECK(cir_evaluate((kFixture + "/perfect.run").c_str(), "/no/such/qrels", &eval) == CIR_ERR_IO);
    REQUIRE(cir_evaluate((kFixture + "/perfect.run").c_str(), (kFixture + "/qrels.txt").c_str(), &eval) == CIR_OK);
    CHECK(cir_evaluation_map(eval) == 1.0);
    CHECK(cir_evaluation_p5(eval) == 0.5);
    cir_evaluation_free(eval);

    cir_provider_free(provider);
    cir_lexical_index_free(lexical2);
    cir_lexical_index_free(lexical);
    cir_lexical_index_free(nullptr);
}
