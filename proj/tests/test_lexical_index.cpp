#include "causalir/errors.hpp"
#include "causalir/lexical_index.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

using namespace causalir;

namespace {

struct RandomCorpus {
    std::vector<std::string> ids;
    std::vector<std::vector<std::string>> tokens;
    std::vector<TokenizedDocument> docs;
};

RandomCorpus random_corpus(std::mt19937_64& rng, std::size_t n, std::size_t vocab) {
    RandomCorpus c;
    for (std::size_t d = 0; d < n; ++d) {
        std::vector<std::string> toks;
        const std::size_t len = 1 + rng() % 30;
        for (std::size_t i = 0; i < len; ++i) toks.push_back("t" + std::to_string(rng() % vocab));
        c.ids.push_back("doc" + std::to_string(d));
        c.tokens.push_back(toks);
        c.docs.push_back(TokenizedDocument{c.ids.back(), toks});
    }
    return c;
}

std::vector<std::string> random_query(std::mt19937_64& rng, std::size_t vocab) {
    std::vector<std::string> q;
    const std::size_t len = 1 + rng() % 5;
    for (std::size_t i = 0; i < len; ++i) q.push_back("t" + std::to_string(rng() % (vocab + 3)));
    return q;
}

} // namespace

TEST_CASE("index statistics") {
    const std::vector<TokenizedDocument> docs{{"d1", {"a", "b"}}, {"d2", {"a"}}};
    const auto index = LexicalIndex::build(docs);
    CHECK(index.num_docs() == 2);
    CHECK(index.document_frequency("a") == 2);
    CHECK(index.document_frequency("b") == 1);
    CHECK(index.document_frequency("c") == 0);
    CHECK(index.avg_doc_length() == 1.5);
    CHECK(index.total_tokens() == 3);
    CHECK(index.terms() == std::vector<std::string>{"a", "b"});
}

TEST_CASE("empty index") {
    const LexicalIndex index = LexicalIndex::build({});
    CHECK(index.num_docs() == 0);
    CHECK(index.idf("a") == 0.0);
    const std::vector<std::string> q{"a"};
    CHECK(index.search(Bm25Params{}, q, 10).hits.empty());
}

TEST_CASE("duplicate document ids are rejected") {
    const std::vector<TokenizedDocument> docs{{"d1", {"a"}}, {"d1", {"b"}}};
    CHECK_THROWS_AS(LexicalIndex::build(docs), Error);
}

TEST_CASE("idf values") {
    const auto one = LexicalIndex::build(std::vector<TokenizedDocument>{{"d1", {"a"}}});
    CHECK(one.idf("a") == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-12));
    CHECK(one.idf("a") == doctest::Approx(0.287682).epsilon(1e-6));

    std::vector<TokenizedDocument> ten;
    for (int i = 0; i < 10; ++i) ten.push_back({"d" + std::to_string(i), {"x"}});
    const auto index = LexicalIndex::build(ten);
    CHECK(index.idf("absent") == doctest::Approx(std::log(22.0)).epsilon(1e-12));
}

TEST_CASE("single document score") {
    const auto index = LexicalIndex::build(std::vector<TokenizedDocument>{{"d1", {"a"}}});
    const std::vector<std::string> q{"a"};
    CHECK(index.bm25_score(Bm25Params{}, q, 0) == doctest::Approx(std::log(4.0 / 3.0)).epsilon(1e-12));
    const std::vector<std::string> miss{"z"};
    CHECK(index.bm25_score(Bm25Params{}, miss, 0) == 0.0);
}

TEST_CASE("search edge cases") {
    const std::vector<TokenizedDocument> docs{{"d1", {"a", "b"}}, {"d2", {"a"}}, {"d3", {"c"}}};
    const auto index = LexicalIndex::build(docs);
    const std::vector<std::string> unknown{"zz", "yy"};
    CHECK(index.search(Bm25Params{}, unknown, 5).hits.empty());
    const std::vector<std::string> q{"a"};
    const auto r = index.search(Bm25Params{}, q, 100);
    CHECK(r.hits.size() == 2);
    CHECK(validate_result_set(r, false).empty());
    CHECK_THROWS_AS(Bm25Params({-1.0, 0.75}).validate(), Error);
    CHECK_THROWS_AS(Bm25Params({1.5, 1.5}).validate(), Error);
}

TEST_CASE("bm25 agrees with the brute-force oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t vocab = 2 + rng() % 49;
        const auto c = random_corpus(rng, 50, vocab);
        const auto index = LexicalIndex::build(c.docs);
        for (int qi = 0; qi < 10; ++qi) {
            const auto q = random_query(rng, vocab);
            for (std::uint32_t d = 0; d < c.docs.size(); ++d) {
                CHECK(std::abs(index.bm25_score(Bm25Params{}, q, d) - oracle::bm25(c.tokens, q, d)) < 1e-9);
            }
            const auto got = index.search(Bm25Params{}, q, 20);
            const auto want = oracle::bm25_ranking(c.ids, c.tokens, q, 20);
            REQUIRE(got.hits.size() == want.size());
            for (std::size_t i = 0; i < want.size(); ++i) {
                CHECK(got.hits[i].doc_id == want[i].id);
                CHECK(std::abs(got.hits[i].score - want[i].score) < 1e-9);
            }
        }
    }
}

TEST_CASE("recounted statistics on 100 random documents") {
    std::mt19937_64 rng(5);
    const auto c = random_corpus(rng, 100, 40);
    const auto index = LexicalIndex::build(c.docs);
    std::size_t total = 0;
    for (std::uint32_t d = 0; d < c.tokens.size(); ++d) {
        CHECK(index.doc_length(d) == c.tokens[d].size());
        total += c.tokens[d].size();
    }
    CHECK(index.total_tokens() == total);
    CHECK(index.avg_doc_length() == doctest::Approx(static_cast<double>(total) / 100.0).epsilon(1e-15));
    for (const auto& term : index.terms()) {
        std::size_t df = 0;
        for (const auto& doc : c.tokens) df += std::find(doc.begin(), doc.end(), term) != doc.end();
        CHECK(index.document_frequency(term) == df);
        for (const auto& p : index.postings(term)) {
            CHECK(p.tf == std::count(c.tokens[p.doc].begin(), c.tokens[p.doc].end(), term));
        }
    }
}

TEST_CASE("bm25 properties") {
    std::mt19937_64 rng(3);
    const auto c = random_corpus(rng, 60, 30);
    const auto index = LexicalIndex::build(c.docs);
    for (int trial = 0; trial < 50; ++trial) {
        const auto q1 = random_query(rng, 30);
        const auto q2 = random_query(rng, 30);
        auto both = q1;
        both.insert(both.end(), q2.begin(), q2.end());
        for (std::uint32_t d = 0; d < index.num_docs(); ++d) {
            const double split = index.bm25_score(Bm25Params{}, q1, d) + index.bm25_score(Bm25Params{}, q2, d);
            CHECK(std::abs(index.bm25_score(Bm25Params{}, both, d) - split) < 1e-12);
        }
        const auto r = index.search(Bm25Params{}, both, 1000);
        for (std::size_t i = 1; i < r.hits.size(); ++i) CHECK(r.hits[i - 1].score >= r.hits[i].score);
        for (const auto& h : r.hits) CHECK(h.score > 0.0);
    }
}

TEST_CASE("unrelated documents only act through N and avgdl") {
    // Adding two documents of average length whose tokens miss the query:
    // the avgdl is unchanged, so the scores move only through idf(N).
    const std::vector<TokenizedDocument> base{{"d1", {"a", "b"}}, {"d2", {"a", "c"}}};
    auto more = base;
    more.push_back({"d3", {"x", "y"}});
    more.push_back({"d4", {"y", "z"}});
    const auto small = LexicalIndex::build(base);
    const auto large = LexicalIndex::build(more);
    REQUIRE(small.avg_doc_length() == large.avg_doc_length());
    const std::vector<std::string> q{"b"};
    const double tf_part_small = small.bm25_score(Bm25Params{}, q, 0) / small.idf("b");
    const double tf_part_large = large.bm25_score(Bm25Params{}, q, 0) / large.idf("b");
    CHECK(tf_part_small == doctest::Approx(tf_part_large).epsilon(1e-15));
}

TEST_CASE("snapshot round trip") {
    std::mt19937_64 rng(17);
    const auto c = random_corpus(rng, 80, 25);
    const auto index = LexicalIndex::build(c.docs);
    testutil::TempDir dir;
    index.save(dir.file("lex.idx"));
    const auto loaded = LexicalIndex::load(dir.file("lex.idx"));
    CHECK(loaded.num_docs() == index.num_docs());
    CHECK(loaded.terms() == index.terms());
    for (int trial = 0; trial < 20; ++trial) {
        const auto q = random_query(rng, 25);
        const auto a = index.search(Bm25Params{}, q, 50);
        const auto b = loaded.search(Bm25Params{}, q, 50);
        REQUIRE(a.hits.size() == b.hits.size());
        for (std::size_t i = 0; i < a.hits.size(); ++i) {
            CHECK(a.hits[i].doc_id == b.hits[i].doc_id);
            CHECK(a.hits[i].score == b.hits[i].score);
        }
    }

    SUBCASE("version mismatch is rejected") {
        std::string bytes = testutil::slurp(dir.file("lex.idx"));
        bytes[8] = 9; // first byte of the little-endian version after the magic
        std::istringstream in(bytes);
        CHECK_THROWS_AS(LexicalIndex::load(in), Error);
    }
    SUBCASE("truncation is rejected") {
        std::string bytes = testutil::slurp(dir.file("lex.idx"));
        std::istringstream in(bytes.substr(0, bytes.size() / 2));
        CHECK_THROWS_AS(LexicalIndex::load(in), Error);
    }
    SUBCASE("bad magic is rejected") {
        std::istringstream in("NOTANIDXxxxxxxxxxxxx");
        CHECK_THROWS_AS(LexicalIndex::load(in), Error);
    }
}
