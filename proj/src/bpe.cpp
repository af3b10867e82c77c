#include <algorithm>
#include <cstdio>
#include <limits>

#include "namefreq/tokenizers.hpp"
#include "namefreq/unicode.hpp"

namespace namefreq {

namespace {

std::string merge_key(const std::string& a, const std::string& b) {
    std::string k;
    k.reserve(a.size() + b.size() + 1);
    k.append(a);
    k.push_back('\0');
    k.append(b);
    return k;
}

std::string byte_token(unsigned char b) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "<0x%02X>", b);
    return buf;
}

// Initial symbol sequence of a word before any merge.
std::vector<std::string> initial_symbols(std::string_view word, const BpeVocab& vocab, bool& unk) {
    std::vector<std::string> out;
    const auto& opts = vocab.options();
    if (opts.byte_level) {
        const auto& table = byte_level_alphabet();
        for (unsigned char b : word) out.push_back(table[b]);
    } else {
        for (const auto& ch : utf8::split_chars(word)) {
            if (vocab.alphabet().count(ch)) {
                out.push_back(ch);
            } else if (opts.byte_fallback) {
                for (unsigned char b : ch) out.push_back(byte_token(b));
            } else {
                out.emplace_back("[UNK]");
                unk = true;
            }
        }
    }
    if (!opts.end_marker.empty()) out.push_back(opts.end_marker);
    return out;
}

void apply_merge(std::vector<std::string>& symbols, const std::string& a, const std::string& b) {
    std::vector<std::string> next;
    next.reserve(symbols.size());
    for (std::size_t i = 0; i < symbols.size(); ++i) {
        if (i + 1 < symbols.size() && symbols[i] == a && symbols[i + 1] == b) {
            next.push_back(a + b);
            ++i;
        } else {
            next.push_back(std::move(symbols[i]));
        }
    }
    symbols = std::move(next);
}

}  // namespace

const std::vector<std::string>& byte_level_alphabet() {
    static const std::vector<std::string> table = [] {
        std::vector<std::string> t(256);
        auto printable = [](int b) {
            return (b >= '!' && b <= '~') || (b >= 0xA1 && b <= 0xAC) || (b >= 0xAE && b <= 0xFF);
        };
        int extra = 0;
        for (int b = 0; b < 256; ++b) {
            t[b] = utf8::encode(printable(b) ? static_cast<char32_t>(b)
                                             : static_cast<char32_t>(256 + extra++));
        }
        return t;
    }();
    return table;
}

BpeVocab::BpeVocab(std::set<std::string> alphabet, std::vector<Merge> merges, Options options)
    : alphabet_(std::move(alphabet)), merges_(std::move(merges)), options_(std::move(options)) {
    if (options_.byte_level) {
        const auto& table = byte_level_alphabet();
        alphabet_.insert(table.begin(), table.end());
    }
    symbols_ = alphabet_;
    if (!options_.end_marker.empty()) symbols_.insert(options_.end_marker);
    for (std::size_t i = 0; i < merges_.size(); ++i) {
        const auto& [a, b] = merges_[i];
        for (const auto* part : {&a, &b}) {
            if (!symbols_.count(*part)) {
                throw VocabError("merge " + std::to_string(i + 1) + " (" + a + " " + b +
                                 ") uses underivable symbol '" + *part + "'");
            }
        }
        rank_.emplace(merge_key(a, b), i);  // first occurrence wins
        symbols_.insert(a + b);
    }
}

std::optional<std::size_t> BpeVocab::rank(const std::string& left, const std::string& right) const {
    const auto it = rank_.find(merge_key(left, right));
    if (it == rank_.end()) return std::nullopt;
    return it->second;
}

BpeVocab train_bpe(const WordCounts& word_counts, std::size_t vocab_size,
                   const BpeTrainOptions& options) {
    if (word_counts.empty()) throw std::invalid_argument("train_bpe: empty corpus");
    std::set<std::string> alphabet;
    std::vector<std::pair<std::vector<std::string>, std::uint64_t>> words;
    for (const auto& [w, c] : word_counts) {
        if (c == 0 || w.empty()) continue;
        auto chars = utf8::split_chars(w);
        alphabet.insert(chars.begin(), chars.end());
        if (!options.end_marker.empty()) chars.push_back(options.end_marker);
        words.emplace_back(std::move(chars), c);
    }
    if (words.empty()) throw std::invalid_argument("train_bpe: empty corpus");
    std::set<std::string> symbols = alphabet;
    if (!options.end_marker.empty()) symbols.insert(options.end_marker);
    if (vocab_size < symbols.size()) {
        throw std::invalid_argument("train_bpe: vocab_size " + std::to_string(vocab_size) +
                                    " below base alphabet size " + std::to_string(symbols.size()));
    }

    std::vector<BpeVocab::Merge> merges;
    while (symbols.size() < vocab_size) {
        std::map<BpeVocab::Merge, std::uint64_t> pair_counts;
        for (const auto& [syms, c] : words) {
            for (std::size_t i = 0; i + 1 < syms.size(); ++i) pair_counts[{syms[i], syms[i + 1]}] += c;
        }
        // std::map iterates pairs in lexicographic order, so strict '>'
        // keeps the smallest pair among equal counts.
        const BpeVocab::Merge* best = nullptr;
        std::uint64_t best_count = 0;
        for (const auto& [pair, c] : pair_counts) {
            if (c > best_count) {
                best = &pair;
                best_count = c;
            }
        }
        if (!best || best_count < options.min_pair_count) break;
        const auto merge = *best;
        for (auto& [syms, c] : words) apply_merge(syms, merge.first, merge.second);
        symbols.insert(merge.first + merge.second);
        merges.push_back(merge);
    }
    return BpeVocab(std::move(alphabet), std::move(merges), {options.end_marker, false, false});
}

Tokenization encode_bpe(std::string_view word, const BpeVocab& vocab) {
    Tokenization t;
    t.word = std::string(word);
    auto symbols = initial_symbols(word, vocab, t.unk);
    for (;;) {
        std::size_t best_rank = std::numeric_limits<std::size_t>::max();
        std::size_t best_at = 0;
        for (std::size_t i = 0; i + 1 < symbols.size(); ++i) {
            if (auto r = vocab.rank(symbols[i], symbols[i + 1]); r && *r < best_rank) {
                best_rank = *r;
                best_at = i;
            }
        }
        if (best_rank == std::numeric_limits<std::size_t>::max()) break;
        const auto a = symbols[best_at];
        const auto b = symbols[best_at + 1];
        apply_merge(symbols, a, b);
    }
    // A bare end marker carries no characters of the word.
    const auto& marker = vocab.options().end_marker;
    if (!marker.empty() && symbols.size() > 1 && symbols.back() == marker) symbols.pop_back();
    t.subtokens = std::move(symbols);
    t.singly = t.subtokens.size() == 1 && !t.unk;
    return t;
}

}  // namespace namefreq
