#include "causalir/text.hpp"

#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using causalir::normalize_token;
using causalir::porter_stem;
using causalir::preprocess;

namespace {

std::string join(const std::vector<std::string>& tokens) {
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty()) out += ' ';
        out += t;
    }
    return out;
}

std::string random_ascii_text(std::mt19937_64& rng) {
    static const std::vector<std::string> pieces{
        "Agreed",   "caresses", "ponies",  "relational", "conditional", "generalization", "hopeful",
        "2010",     "Delhi,",   "IPL",     "controversy", "resigned",  "running",        "happily",
        "!",        "--",       "x86_64",  "e-mail",     "U.S.",        "it's",           "feed",
        "sized",    "motoring", "electrical", "adjustment", "goodness", "probate",       "3.14"};
    std::string text;
    const std::size_t n = rng() % 20;
    for (std::size_t i = 0; i < n; ++i) {
        text += pieces[rng() % pieces.size()];
        text += (rng() % 4 == 0) ? "\t" : " ";
    }
    return text;
}

} // namespace

TEST_CASE("porter stemmer matches the reference table") {
    std::ifstream in(CAUSALIR_TEST_DATA "/porter_reference.tsv");
    REQUIRE(in);
    std::string line;
    std::size_t checked = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto tab = line.find('\t');
        REQUIRE(tab != std::string::npos);
        const std::string word = line.substr(0, tab);
        const std::string stem = line.substr(tab + 1);
        CHECK_MESSAGE(porter_stem(word) == stem, word);
        ++checked;
    }
    CHECK(checked > 1000);
}

TEST_CASE("preprocess examples") {
    CHECK(preprocess("Delhi, 2010!") == std::vector<std::string>{"delhi", "2010"});
    CHECK(preprocess("").empty());
    CHECK(preprocess("Shashi Tharoor resigned") == std::vector<std::string>{"shashi", "tharoor", "resign"});
    CHECK(preprocess("IPL controversy") == std::vector<std::string>{"ipl", "controversi"});
}

TEST_CASE("numeric and mixed tokens are not stemmed") {
    CHECK(normalize_token("2010") == "2010");
    CHECK(normalize_token("x86") == "x86");
    CHECK(normalize_token("sized") == "size");
}

TEST_CASE("normalize_token reaches a fixed point") {
    // Plain Porter maps agreed -> agre -> agr.
    CHECK(porter_stem("agreed") == "agre");
    CHECK(porter_stem("agre") == "agr");
    CHECK(normalize_token("agreed") == "agr");
    CHECK(normalize_token("agr") == "agr");
}

TEST_CASE("non-ASCII letters stay inside words and are case folded") {
    CHECK(preprocess("Café ÉCOLE") == std::vector<std::string>{"café", "école"});
    CHECK(preprocess("Москва\u2014Delhi") == std::vector<std::string>{"москва", "delhi"});
}

TEST_CASE("preprocess properties over random ASCII text") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 500; ++trial) {
        const std::string a = random_ascii_text(rng);
        const std::string b = random_ascii_text(rng);
        const auto pa = preprocess(a);

        CHECK(preprocess(join(pa)) == pa);

        for (const auto& t : pa) {
            for (const char c : t) CHECK(((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')));
        }

        auto concatenated = pa;
        const auto pb = preprocess(b);
        concatenated.insert(concatenated.end(), pb.begin(), pb.end());
        CHECK(preprocess(a + " " + b) == concatenated);
    }
}

TEST_CASE("fixture vocabulary is idempotent under preprocess") {
    std::ifstream in(CAUSALIR_TEST_DATA "/porter_reference.tsv");
    std::string line;
    while (std::getline(in, line)) {
        const auto tab = line.find('\t');
        if (line.empty() || line[0] == '#' || tab == std::string::npos) continue;
        const auto once = preprocess(line.substr(0, tab));
        CHECK_MESSAGE(preprocess(join(once)) == once, line);
    }
}

TEST_CASE("split_words reports byte offsets") {
    const auto words = causalir::split_words("Hi, you.");
    REQUIRE(words.size() == 2);
    CHECK(words[0].begin == 0);
    CHECK(words[0].end == 2);
    CHECK(words[1].begin == 4);
    CHECK(words[1].end == 7);
}
