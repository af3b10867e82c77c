#pragma once

// Minimal UTF-8 helpers: code point decoding and the Unicode letter class
// (general categories Lu, Ll, Lt, Lm, Lo) used for word boundaries.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace namefreq::utf8 {

inline constexpr char32_t kInvalid = 0xFFFFFFFF;

struct Decoded {
    char32_t cp;       // kInvalid for malformed input
    std::size_t len;   // bytes consumed, >= 1
};

// Decodes one code point at s[pos]. Overlong forms, surrogates and
// truncated sequences decode as kInvalid with len 1.
Decoded decode(std::string_view s, std::size_t pos);

bool is_letter(char32_t cp);

inline bool is_ascii_letter(unsigned char c) {
    return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z');
}

std::string encode(char32_t cp);

// Splits into code points, each returned as its UTF-8 string. Malformed
// bytes come back as single-byte strings.
std::vector<std::string> split_chars(std::string_view s);

// Maximal runs of letters, as byte spans [begin, end).
struct Span {
    std::size_t begin;
    std::size_t end;
};
std::vector<Span> letter_runs(std::string_view s);

}  // namespace namefreq::utf8
