#include "causalir/text.hpp"

#include <cstdint>

namespace causalir {

namespace {

constexpr char32_t kInvalid = 0xFFFFFFFF;

// Decodes one UTF-8 sequence at text[pos]; advances pos. Malformed input
// consumes one byte and yields kInvalid.
char32_t decode_utf8(std::string_view text, std::size_t& pos) {
    const auto lead = static_cast<unsigned char>(text[pos]);
    if (lead < 0x80) {
        ++pos;
        return lead;
    }
    std::size_t len = 0;
    char32_t cp = 0;
    if ((lead & 0xE0) == 0xC0) {
        len = 2;
        cp = lead & 0x1F;
    } else if ((lead & 0xF0) == 0xE0) {
        len = 3;
        cp = lead & 0x0F;
    } else if ((lead & 0xF8) == 0xF0) {
        len = 4;
        cp = lead & 0x07;
    } else {
        ++pos;
        return kInvalid;
    }
    if (pos + len > text.size()) {
        ++pos;
        return kInvalid;
    }
    for (std::size_t i = 1; i < len; ++i) {
        const auto c = static_cast<unsigned char>(text[pos + i]);
        if ((c & 0xC0) != 0x80) {
            ++pos;
            return kInvalid;
        }
        cp = (cp << 6) | (c & 0x3F);
    }
    static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
        ++pos;
        return kInvalid;
    }
    pos += len;
    return cp;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out += static_cast<char>(cp);
    } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
    }
}

bool is_word_char(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z') || (cp >= '0' && cp <= '9');
    }
    if (cp == kInvalid) return false;
    // Latin-1 punctuation, symbols and the two operators.
    if (cp <= 0xBF || cp == 0xD7 || cp == 0xF7) return false;
    // General punctuation, currency, letterlike/arrows/math/box drawing.
    if (cp >= 0x2000 && cp <= 0x2BFF) return false;
    // CJK symbols and punctuation, fullwidth ASCII punctuation.
    if (cp >= 0x3000 && cp <= 0x303F) return false;
    if (cp >= 0xFF00 && cp <= 0xFF0F) return false;
    if (cp >= 0xFF1A && cp <= 0xFF20) return false;
    if (cp == 0xFEFF || cp == 0xFFFD) return false;
    return true;
}

// Simple one-to-one case folding for the common alphabetic blocks.
char32_t fold_case(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp < 0x80) return cp;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    if (cp >= 0x100 && cp <= 0x137 && cp % 2 == 0) return cp + 1;
    if (cp >= 0x139 && cp <= 0x148 && cp % 2 == 1) return cp + 1;
    if (cp >= 0x14A && cp <= 0x177 && cp % 2 == 0) return cp + 1;
    if (cp >= 0x391 && cp <= 0x3AB && cp != 0x3A2) return cp + 0x20;
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
    return cp;
}

} // namespace

bool is_ascii_alpha_word(std::string_view token) {
    if (token.empty()) return false;
    for (const char c : token) {
        if (c < 'a' || c > 'z') return false;
    }
    return true;
}

std::string normalize_token(std::string_view token) {
    if (!is_ascii_alpha_word(token)) return std::string(token);
    std::string current(token);
    // Each pass either shortens the word or stabilizes within a few rounds.
    for (int round = 0; round < 16; ++round) {
        std::string next = porter_stem(current);
        if (next == current || next.empty()) break;
        current = std::move(next);
    }
    return current;
}

std::vector<Word> split_words(std::string_view text) {
    std::vector<Word> words;
    Word current;
    bool in_word = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t start = pos;
        const char32_t cp = decode_utf8(text, pos);
        if (is_word_char(cp)) {
            if (!in_word) {
                current = Word{{}, start, start};
                in_word = true;
            }
            append_utf8(current.text, fold_case(cp));
            current.end = pos;
        } else if (in_word) {
            words.push_back(std::move(current));
            in_word = false;
        }
    }
    if (in_word) words.push_back(std::move(current));
    return words;
}

std::vector<std::string> preprocess(std::string_view text) {
    std::vector<std::string> tokens;
    for (auto& word : split_words(text)) {
        tokens.push_back(normalize_token(word.text));
    }
    return tokens;
}

} // namespace causalir
