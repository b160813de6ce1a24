#include "causalir/errors.hpp"
#include "causalir/evaluation.hpp"

#include "oracles.hpp"
#include "test_util.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace causalir;

namespace {

using Ranking = std::vector<std::string>;
using RelSet = std::unordered_set<std::string>;

struct FuzzCase {
    RunFile run;
    Qrels qrels;
    std::vector<std::string> topics;
    std::vector<Ranking> rankings;           // parallel to topics; empty when absent from the run
    std::vector<std::set<std::string>> rels; // parallel to topics
};

FuzzCase fuzz_case(std::mt19937_64& rng) {
    FuzzCase c;
    c.run.tag = "fuzz";
    const std::size_t num_topics = 1 + rng() % 6;
    for (std::size_t t = 0; t < num_topics; ++t) {
        const std::string topic = "T" + std::to_string(t);
        c.topics.push_back(topic);
        std::set<std::string> rel;
        const std::size_t pool = 5 + rng() % 40;
        for (std::size_t d = 0; d < pool; ++d) {
            const int grade = static_cast<int>(rng() % 4) - 1; // -1 means unjudged
            if (grade >= 0) {
                c.qrels.add(topic, "d" + std::to_string(d), grade);
                if (grade > 0) rel.insert("d" + std::to_string(d));
            }
        }
        if (!c.qrels.grade(topic, "sentinel")) c.qrels.add(topic, "sentinel", 0);
        c.rels.push_back(rel);

        Ranking ranking;
        if (rng() % 5 != 0) {
            std::vector<std::size_t> ids(pool + 10);
            for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
            std::shuffle(ids.begin(), ids.end(), rng);
            ids.resize(rng() % ids.size());
            std::vector<RunEntry> entries;
            for (std::size_t r = 0; r < ids.size(); ++r) {
                ranking.push_back("d" + std::to_string(ids[r]));
                entries.push_back({ranking.back(), r + 1, static_cast<double>(ids.size() - r)});
            }
            c.run.topics.emplace_back(topic, std::move(entries));
        }
        c.rankings.push_back(ranking);
    }
    return c;
}

} // namespace

TEST_CASE("average precision examples") {
    const Ranking ranked{"a", "x", "b", "y"};
    CHECK(average_precision(ranked, RelSet{"a", "b"}) == doctest::Approx(0.833333).epsilon(1e-6));
    CHECK(std::abs(average_precision(ranked, RelSet{"a", "b"}) - (1.0 + 2.0 / 3.0) / 2.0) < 1e-15);
    CHECK(average_precision(Ranking{"a", "b", "c"}, RelSet{"a", "b"}) == 1.0);
    CHECK(average_precision(Ranking{"x", "y"}, RelSet{"a"}) == 0.0);
    CHECK(average_precision(Ranking{"x", "y"}, RelSet{}) == 0.0);
}

TEST_CASE("precision at 5 examples") {
    CHECK(precision_at_k(Ranking{"a", "x", "b", "y", "c", "d"}, RelSet{"a", "b", "c", "d"}) == 0.6);
    CHECK(precision_at_k(Ranking{"a", "b", "c", "d", "e"}, RelSet{"a", "b", "c", "d", "e"}) == 1.0);
    CHECK(precision_at_k(Ranking{"a", "x"}, RelSet{"a"}) == 0.2);
    CHECK_THROWS_AS(precision_at_k(Ranking{"a"}, RelSet{"a"}, 0), Error);
}

TEST_CASE("metrics match an independent recount") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = fuzz_case(rng);
        const auto eval = evaluate(c.run, c.qrels);
        double map = 0.0, p5 = 0.0;
        REQUIRE(eval.per_topic.size() == c.topics.size());
        for (std::size_t t = 0; t < c.topics.size(); ++t) {
            const double ap = oracle::average_precision(c.rankings[t], c.rels[t]);
            const double p = oracle::precision_at(c.rankings[t], c.rels[t], 5);
            CHECK(eval.per_topic[t].topic_id == c.topics[t]);
            CHECK(std::abs(eval.per_topic[t].average_precision - ap) < 1e-10);
            CHECK(std::abs(eval.per_topic[t].precision_at_5 - p) < 1e-10);
            map += ap;
            p5 += p;
        }
        map /= static_cast<double>(c.topics.size());
        p5 /= static_cast<double>(c.topics.size());
        CHECK(std::abs(eval.map - map) < 1e-10);
        CHECK(std::abs(eval.precision_at_5 - p5) < 1e-10);
        CHECK(mean_over_topics(Metric::AveragePrecision, c.run, c.qrels) == eval.map);
        CHECK(mean_over_topics(Metric::PrecisionAt5, c.run, c.qrels) == eval.precision_at_5);
    }
}

TEST_CASE("metric invariants") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        Ranking ranked;
        RelSet rel;
        const std::size_t n = 1 + rng() % 30;
        for (std::size_t i = 0; i < n; ++i) {
            ranked.push_back("d" + std::to_string(i));
            if (rng() % 3 == 0) rel.insert(ranked.back());
        }
        if (rng() % 2) rel.insert("unretrieved");
        const double ap = average_precision(ranked, rel);
        const double p5 = precision_at_k(ranked, rel);

        // Relabeling ids leaves both metrics unchanged.
        Ranking renamed;
        RelSet renamed_rel;
        for (const auto& d : ranked) renamed.push_back("x" + d);
        for (const auto& d : rel) renamed_rel.insert("x" + d);
        CHECK(average_precision(renamed, renamed_rel) == ap);
        CHECK(precision_at_k(renamed, renamed_rel) == p5);

        // Promoting a relevant document never lowers AP.
        for (std::size_t i = 1; i < ranked.size(); ++i) {
            if (rel.contains(ranked[i]) && !rel.contains(ranked[i - 1])) {
                auto swapped = ranked;
                std::swap(swapped[i], swapped[i - 1]);
                CHECK(average_precision(swapped, rel) >= ap);
            }
        }
    }
}

TEST_CASE("run files") {
    RunFile run;
    run.tag = "tag1";
    run.topics.push_back({"101", {{"d1", 1, 12.8}, {"d2", 2, 0.1 + 0.2}, {"d3", 3, 1e-300}}});
    run.topics.push_back({"102", {{"d9", 1, -0.5}}});
    std::ostringstream out;
    write_run(out, run);
    CHECK(out.str().rfind("101 Q0 d1 1 12.8 tag1\n", 0) == 0);
    std::istringstream in(out.str());
    CHECK(read_run(in) == run);

    auto reject = [](const std::string& text, const std::string& fragment, std::size_t depth = 0) {
        std::istringstream bad(text);
        try {
            read_run(bad, "r", depth);
            FAIL("expected rejection of: " << text);
        } catch (const Error& e) {
            CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
        }
    };
    reject("101 Q0 d1 1 2.0 t\n101 Q0 d2 3 1.0 t\n", "r:2");
    reject("101 Q0 d1 1 1.0 t\n101 Q0 d2 2 2.0 t\n", "r:2");
    reject("101 Q0 d1 1 1.0 t\n101 Q0 d1 2 0.5 t\n", "r:2");
    reject("101 Q0 d1 1 1.0\n", "r:1");
    reject("101 Q0 d1 1 abc t\n", "r:1");
    reject("101 Q0 d1 1 1.0 t\n102 Q0 d1 1 1.0 u\n", "r:2");
    reject("101 Q0 d1 1 2.0 t\n101 Q0 d2 2 1.0 t\n", "r:2", 1);

    const std::vector<ResultSet> results{{"7", {{"a", 2.0, Strategy::Q1}, {"b", 1.0, Strategy::Q2}}}};
    const auto from = RunFile::from_results(results, "x");
    REQUIRE(from.find("7") != nullptr);
    CHECK(from.find("7")->at(1) == RunEntry{"b", 2, 1.0});
    CHECK(from.find("8") == nullptr);
}

TEST_CASE("run file round trip on disk") {
    std::mt19937_64 rng(3);
    testutil::TempDir dir;
    for (int trial = 0; trial < 20; ++trial) {
        auto c = fuzz_case(rng);
        std::uniform_real_distribution<double> u(-5, 50);
        for (auto& [topic, entries] : c.run.topics) {
            std::vector<double> scores;
            for (std::size_t i = 0; i < entries.size(); ++i) scores.push_back(u(rng));
            std::sort(scores.rbegin(), scores.rend());
            for (std::size_t i = 0; i < entries.size(); ++i) entries[i].score = scores[i];
        }
        write_run(dir.file("r.txt"), c.run);
        const auto back = read_run(dir.file("r.txt"));
        // A topic with no entries has no lines, so it cannot survive the trip.
        auto expected = c.run;
        std::erase_if(expected.topics, [](const auto& t) { return t.second.empty(); });
        CHECK(back == expected);
        CHECK(evaluate(back, c.qrels).map == evaluate(c.run, c.qrels).map);
    }
}

TEST_CASE("qrels") {
    std::istringstream in("1 0 a 1\n1 0 b 0\n2 0 a 2\n\n3 0 c 0\n");
    const auto q = Qrels::read(in);
    CHECK(q.size() == 4);
    CHECK(q.topics() == std::vector<std::string>{"1", "2", "3"});
    CHECK(q.relevant("1") == RelSet{"a"});
    CHECK(q.relevant("3").empty());
    CHECK(q.grade("2", "a") == 2);
    CHECK_FALSE(q.grade("2", "b").has_value());

    std::istringstream dup("1 0 a 1\n1 0 a 0\n");
    CHECK_THROWS_AS(Qrels::read(dup), Error);
    std::istringstream neg("1 0 a -1\n");
    CHECK_THROWS_AS(Qrels::read(neg), Error);
    std::istringstream short_line("1 0 a\n");
    CHECK_THROWS_AS(Qrels::read(short_line), Error);
    CHECK_THROWS_AS(Qrels::read(std::filesystem::path("/no/such/qrels")), Error);

    // Topics judged but absent from the run count as zero.
    RunFile run;
    run.topics.push_back({"1", {{"a", 1, 1.0}}});
    const auto e = evaluate(run, q);
    CHECK(e.map == doctest::Approx((1.0 + 0.0 + 0.0) / 3.0));
    CHECK(e.per_topic[1].retrieved == 0);
}
