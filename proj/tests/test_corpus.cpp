#include "causalir/corpus.hpp"
#include "causalir/errors.hpp"
#include "causalir/text.hpp"

#include "test_util.hpp"

#include <doctest.h>

using namespace causalir;

TEST_CASE("json lines corpus") {
    testutil::TempDir dir;

    SUBCASE("single record") {
        const auto p = dir.write("c.jsonl", R"({"id":"d1","text":"a b"})" "\n");
        const auto docs = load_corpus(p, CorpusFormat::JsonLines);
        REQUIRE(docs.size() == 1);
        CHECK(docs[0].doc_id == "d1");
        CHECK(docs[0].text == "a b");
        CHECK_FALSE(docs[0].title.has_value());
        CHECK(docs[0].indexable_text() == "a b");
    }

    SUBCASE("empty file") {
        const auto p = dir.write("c.jsonl", "");
        CHECK(load_corpus(p, CorpusFormat::JsonLines).empty());
    }

    SUBCASE("title is indexed ahead of the body") {
        const auto p = dir.write("c.jsonl", R"({"id":"d1","title":"Head","text":"body"})" "\n");
        const auto docs = load_corpus(p, CorpusFormat::JsonLines);
        REQUIRE(docs.size() == 1);
        CHECK(docs[0].indexable_text() == "Head\nbody");
        CHECK(tokenize(docs[0]).tokens == std::vector<std::string>{"head", "bodi"});
    }

    SUBCASE("missing id is skipped by default and fatal when strict") {
        const auto p = dir.write("c.jsonl", "{\"id\":\"d1\",\"text\":\"x\"}\n{\"text\":\"y\"}\nnot json\n"
                                            "{\"id\":\"d3\",\"text\":\"z\"}\n");
        CorpusReader reader(p, CorpusFormat::JsonLines);
        std::vector<std::string> ids;
        while (auto d = reader.next()) ids.push_back(d->doc_id);
        CHECK(ids == std::vector<std::string>{"d1", "d3"});
        CHECK(reader.records_skipped() == 2);

        try {
            load_corpus(p, CorpusFormat::JsonLines, LoadOptions{true});
            FAIL("strict load should throw");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::Parse);
            CHECK(std::string(e.what()).find("record 2") != std::string::npos);
        }
    }

    SUBCASE("missing file") {
        CHECK_THROWS_AS(load_corpus(dir.file("absent.jsonl"), CorpusFormat::JsonLines), Error);
    }
}

TEST_CASE("TREC SGML corpus") {
    testutil::TempDir dir;
    const auto p = dir.write("c.sgml",
                             "<DOC>\n<DOCNO> T1 </DOCNO>\n<HEADLINE>Big news</HEADLINE>\n<TEXT>\nFirst <b>body</b>.\n"
                             "</TEXT>\n</DOC>\n<DOC><DOCNO>T2</DOCNO><TEXT>Second</TEXT></DOC><DOC><TEXT>no id</TEXT></DOC>\n");
    CorpusReader reader(p, CorpusFormat::TrecSgml);
    std::vector<Document> docs;
    while (auto d = reader.next()) docs.push_back(*d);
    REQUIRE(docs.size() == 2);
    CHECK(docs[0].doc_id == "T1");
    CHECK(docs[0].title == std::optional<std::string>("Big news"));
    CHECK(preprocess(docs[0].text) == std::vector<std::string>{"first", "bodi"});
    CHECK(docs[1].doc_id == "T2");
    CHECK(reader.records_skipped() == 1);
}

TEST_CASE("corpus format names") {
    CHECK(parse_corpus_format("jsonl") == CorpusFormat::JsonLines);
    CHECK(parse_corpus_format("trec") == CorpusFormat::TrecSgml);
    CHECK_THROWS_AS(parse_corpus_format("csv"), Error);
}

TEST_CASE("topics") {
    testutil::TempDir dir;
    const auto good = dir.write("t.jsonl", R"({"id":"1","title":"T","narrative":"N"})" "\n"
                                           R"({"id":"2","title":"U"})" "\n");
    const auto topics = load_topics(good);
    REQUIRE(topics.size() == 2);
    CHECK(topics[0].narrative == "N");
    CHECK(topics[1].narrative.empty());

    const auto bad = dir.write("b.jsonl", R"({"id":"1","title":"T"})" "\n" R"({"id":"2","narrative":"x"})" "\n");
    try {
        load_topics(bad);
        FAIL("missing title should throw");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("topic 2") != std::string::npos);
    }
}
