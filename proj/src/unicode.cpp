#include "namefreq/unicode.hpp"

#include <algorithm>
#include <array>
#include <cstdint>

namespace namefreq::utf8 {

namespace {

struct Range {
    char32_t lo;
    char32_t hi;
};

constexpr Range kLetterRanges[] = {
#include "unicode_letters.inc"
};

}  // namespace

Decoded decode(std::string_view s, std::size_t pos) {
    const auto b0 = static_cast<unsigned char>(s[pos]);
    if (b0 < 0x80) return {b0, 1};
    std::size_t len;
    char32_t cp;
    char32_t min;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2; cp = b0 & 0x1F; min = 0x80;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3; cp = b0 & 0x0F; min = 0x800;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4; cp = b0 & 0x07; min = 0x10000;
    } else {
        return {kInvalid, 1};
    }
    if (pos + len > s.size()) return {kInvalid, 1};
    for (std::size_t i = 1; i < len; ++i) {
        const auto b = static_cast<unsigned char>(s[pos + i]);
        if ((b & 0xC0) != 0x80) return {kInvalid, 1};
        cp = (cp << 6) | (b & 0x3F);
    }
    if (cp < min || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return {kInvalid, 1};
    return {cp, len};
}

bool is_letter(char32_t cp) {
    if (cp < 0x80) return is_ascii_letter(static_cast<unsigned char>(cp));
    if (cp == kInvalid) return false;
    const auto* end = std::end(kLetterRanges);
    const auto* it = std::upper_bound(std::begin(kLetterRanges), end, cp,
                                      [](char32_t v, const Range& r) { return v < r.lo; });
    if (it == std::begin(kLetterRanges)) return false;
    --it;
    return cp <= it->hi;
}

std::string encode(char32_t cp) {
    std::string out;
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
    return out;
}

std::vector<std::string> split_chars(std::string_view s) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < s.size();) {
        const auto d = decode(s, i);
        out.emplace_back(s.substr(i, d.len));
        i += d.len;
    }
    return out;
}

std::vector<Span> letter_runs(std::string_view s) {
    std::vector<Span> out;
    std::size_t i = 0;
    while (i < s.size()) {
        const auto d = decode(s, i);
        if (!is_letter(d.cp)) {
            i += d.len;
            continue;
        }
        const std::size_t begin = i;
        i += d.len;
        while (i < s.size()) {
            const auto e = decode(s, i);
            if (!is_letter(e.cp)) break;
            i += e.len;
        }
        out.push_back({begin, i});
    }
    return out;
}

}  // namespace namefreq::utf8
