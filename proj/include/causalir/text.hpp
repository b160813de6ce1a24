#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace causalir {

/// One pass of the original Porter (1980) suffix-stripping algorithm.
/// Expects a lowercase ASCII word.
std::string porter_stem(std::string_view word);

/// Normalizes a lowercase token: purely alphabetic ASCII tokens are Porter
/// stemmed until the stem stops changing, anything else is returned as is.
/// Iterating to a fixed point makes preprocess() idempotent.
std::string normalize_token(std::string_view token);

/// A lowercased alphanumeric run and its byte range in the source text.
struct Word {
    std::string text;
    std::size_t begin = 0;
    std::size_t end = 0;
};

/// Splits UTF-8 text into maximal alphanumeric runs, lowercased.
/// Non-ASCII letters count as alphanumeric; invalid bytes and non-ASCII
/// punctuation/whitespace act as separators.
std::vector<Word> split_words(std::string_view text);

/// Lowercase, strip non-alphanumerics, stem. Shared by indexing and querying.
std::vector<std::string> preprocess(std::string_view text);

bool is_ascii_alpha_word(std::string_view token);

} // namespace causalir
