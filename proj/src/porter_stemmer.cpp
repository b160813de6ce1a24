// Original Porter stemmer, "An algorithm for suffix stripping" (1980).
// The 1980 rule set is used verbatim (no later "bli"/"logi" revisions).

#include "causalir/text.hpp"

#include <array>
#include <utility>

namespace causalir {

namespace {

class Stemmer {
public:
    explicit Stemmer(std::string_view word) : w_(word) {}

    std::string run() && {
        step1a();
        step1b();
        step1c();
        step2();
        step3();
        step4();
        step5a();
        step5b();
        return std::move(w_);
    }

private:
    std::string w_;

    bool is_consonant(std::size_t i) const {
        switch (w_[i]) {
        case 'a': case 'e': case 'i': case 'o': case 'u':
            return false;
        case 'y':
            return i == 0 || !is_consonant(i - 1);
        default:
            return true;
        }
    }

    // Number of VC sequences in w_[0, len).
    int measure(std::size_t len) const {
        int m = 0;
        std::size_t i = 0;
        while (i < len && is_consonant(i)) ++i;
        while (i < len) {
            while (i < len && !is_consonant(i)) ++i;
            if (i >= len) break;
            while (i < len && is_consonant(i)) ++i;
            ++m;
        }
        return m;
    }

    bool has_vowel(std::size_t len) const {
        for (std::size_t i = 0; i < len; ++i) {
            if (!is_consonant(i)) return true;
        }
        return false;
    }

    bool ends_double_consonant(std::size_t len) const {
        return len >= 2 && w_[len - 1] == w_[len - 2] && is_consonant(len - 1);
    }

    // *o: stem ends consonant-vowel-consonant, last consonant not w, x or y.
    bool ends_cvc(std::size_t len) const {
        if (len < 3) return false;
        if (!is_consonant(len - 3) || is_consonant(len - 2) || !is_consonant(len - 1)) {
            return false;
        }
        const char c = w_[len - 1];
        return c != 'w' && c != 'x' && c != 'y';
    }

    bool ends_with(std::string_view suffix) const {
        return w_.size() >= suffix.size() &&
               std::string_view(w_).substr(w_.size() - suffix.size()) == suffix;
    }

    std::size_t stem_len(std::string_view suffix) const { return w_.size() - suffix.size(); }

    void replace_suffix(std::string_view suffix, std::string_view with) {
        w_.resize(stem_len(suffix));
        w_.append(with);
    }

    void step1a() {
        if (ends_with("sses")) {
            replace_suffix("sses", "ss");
        } else if (ends_with("ies")) {
            replace_suffix("ies", "i");
        } else if (ends_with("ss")) {
            // unchanged
        } else if (ends_with("s")) {
            replace_suffix("s", "");
        }
    }

    void step1b() {
        if (ends_with("eed")) {
            if (measure(stem_len("eed")) > 0) replace_suffix("eed", "ee");
            return;
        }
        std::string_view removed;
        if (ends_with("ed") && has_vowel(stem_len("ed"))) {
            removed = "ed";
        } else if (ends_with("ing") && has_vowel(stem_len("ing"))) {
            removed = "ing";
        } else {
            return;
        }
        replace_suffix(removed, "");
        if (ends_with("at")) {
            w_ += 'e';
        } else if (ends_with("bl")) {
            w_ += 'e';
        } else if (ends_with("iz")) {
            w_ += 'e';
        } else if (ends_double_consonant(w_.size())) {
            const char c = w_.back();
            if (c != 'l' && c != 's' && c != 'z') w_.pop_back();
        } else if (measure(w_.size()) == 1 && ends_cvc(w_.size())) {
            w_ += 'e';
        }
    }

    void step1c() {
        if (ends_with("y") && has_vowel(stem_len("y"))) {
            w_.back() = 'i';
        }
    }

    using Rule = std::pair<std::string_view, std::string_view>;

    // The first rule whose suffix matches is the only one considered.
    template <std::size_t N>
    void apply_rules(const std::array<Rule, N>& rules, int min_measure) {
        for (const auto& [suffix, replacement] : rules) {
            if (ends_with(suffix)) {
                if (measure(stem_len(suffix)) > min_measure) {
                    replace_suffix(suffix, replacement);
                }
                return;
            }
        }
    }

    void step2() {
        static constexpr std::array<Rule, 20> rules{{
            {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},
            {"anci", "ance"},   {"izer", "ize"},    {"abli", "able"},
            {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},
            {"ousli", "ous"},   {"ization", "ize"}, {"ation", "ate"},
            {"ator", "ate"},    {"alism", "al"},    {"iveness", "ive"},
            {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},
            {"iviti", "ive"},   {"biliti", "ble"},
        }};
        apply_rules(rules, 0);
    }

    void step3() {
        static constexpr std::array<Rule, 7> rules{{
            {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
            {"ical", "ic"},  {"ful", ""},   {"ness", ""},
        }};
        apply_rules(rules, 0);
    }

    void step4() {
        static constexpr std::array<std::string_view, 19> suffixes{
            "al",   "ance", "ence", "er",  "ic",  "able", "ible",
            "ant",  "ement", "ment", "ent", "ion", "ou",  "ism",
            "ate",  "iti",  "ous",  "ive", "ize",
        };
        for (const auto suffix : suffixes) {
            if (!ends_with(suffix)) continue;
            const std::size_t len = stem_len(suffix);
            bool ok = measure(len) > 1;
            if (ok && suffix == "ion") {
                ok = len > 0 && (w_[len - 1] == 's' || w_[len - 1] == 't');
            }
            if (ok) w_.resize(len);
            return;
        }
    }

    void step5a() {
        if (!ends_with("e")) return;
        const std::size_t len = stem_len("e");
        const int m = measure(len);
        if (m > 1 || (m == 1 && !ends_cvc(len))) w_.resize(len);
    }

    void step5b() {
        if (measure(w_.size()) > 1 && ends_double_consonant(w_.size()) && w_.back() == 'l') {
            w_.pop_back();
        }
    }
};

} // namespace

std::string porter_stem(std::string_view word) {
    if (word.empty()) return {};
    return Stemmer(word).run();
}

} // namespace causalir
