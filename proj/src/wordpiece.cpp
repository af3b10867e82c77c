#include <algorithm>

#include "detail/text.hpp"
#include "namefreq/tokenizers.hpp"
#include "namefreq/unicode.hpp"

namespace namefreq {

WordPieceVocab::WordPieceVocab(std::set<std::string> tokens, std::string continuation, std::string unk)
    : tokens_(std::move(tokens)), continuation_(std::move(continuation)), unk_(std::move(unk)) {}

std::vector<std::string> WordPieceVocab::missing_characters() const {
    std::set<std::string> missing;
    for (const auto& t : tokens_) {
        if (t == unk_ || (t.size() > 2 && t.front() == '[' && t.back() == ']')) continue;
        std::string_view body = t;
        if (detail::starts_with(body, continuation_) && body.size() > continuation_.size()) {
            body.remove_prefix(continuation_.size());
        }
        for (const auto& ch : utf8::split_chars(body)) {
            if (!tokens_.count(ch) && !tokens_.count(continuation_ + ch)) missing.insert(ch);
        }
    }
    return {missing.begin(), missing.end()};
}

WordPieceVocab train_wordpiece(const WordCounts& word_counts, std::size_t vocab_size) {
    const std::string cont = "##";
    std::set<std::string> vocab;
    std::vector<std::pair<std::vector<std::string>, std::uint64_t>> words;
    for (const auto& [w, c] : word_counts) {
        if (c == 0 || w.empty()) continue;
        auto chars = utf8::split_chars(w);
        for (std::size_t i = 1; i < chars.size(); ++i) chars[i] = cont + chars[i];
        vocab.insert(chars.begin(), chars.end());
        words.emplace_back(std::move(chars), c);
    }
    if (words.empty()) throw std::invalid_argument("train_wordpiece: empty corpus");
    if (vocab_size < vocab.size()) {
        throw std::invalid_argument("train_wordpiece: vocab_size " + std::to_string(vocab_size) +
                                    " below base alphabet size " + std::to_string(vocab.size()));
    }

    while (vocab.size() < vocab_size) {
        std::map<std::string, std::uint64_t> unit_counts;
        std::map<std::pair<std::string, std::string>, std::uint64_t> pair_counts;
        for (const auto& [syms, c] : words) {
            for (std::size_t i = 0; i < syms.size(); ++i) {
                unit_counts[syms[i]] += c;
                if (i + 1 < syms.size()) pair_counts[{syms[i], syms[i + 1]}] += c;
            }
        }
        // Likelihood gain of merging (a, b) is proportional to
        // count(ab) / (count(a) count(b)). Lexicographic iteration plus a
        // strict '>' keeps the smallest pair among equal scores.
        const std::pair<std::string, std::string>* best = nullptr;
        double best_score = -1.0;
        for (const auto& [pair, c] : pair_counts) {
            const double denom = static_cast<double>(unit_counts[pair.first]) *
                                 static_cast<double>(unit_counts[pair.second]);
            const double score = static_cast<double>(c) / denom;
            if (score > best_score) {
                best_score = score;
                best = &pair;
            }
        }
        if (!best) break;
        const auto [a, b] = *best;
        const std::string merged = a + b.substr(cont.size());
        for (auto& [syms, c] : words) {
            std::vector<std::string> next;
            next.reserve(syms.size());
            for (std::size_t i = 0; i < syms.size(); ++i) {
                if (i + 1 < syms.size() && syms[i] == a && syms[i + 1] == b) {
                    next.push_back(merged);
                    ++i;
                } else {
                    next.push_back(std::move(syms[i]));
                }
            }
            syms = std::move(next);
        }
        vocab.insert(merged);
    }
    return WordPieceVocab(std::move(vocab), cont);
}

Tokenization encode_wordpiece(std::string_view word, const WordPieceVocab& vocab) {
    Tokenization t;
    t.word = std::string(word);
    const auto chars = utf8::split_chars(word);
    auto unknown = [&] {
        t.subtokens = {vocab.unk()};
        t.unk = true;
        t.singly = false;
        return t;
    };
    if (chars.empty() || chars.size() > vocab.max_input_chars) return unknown();

    std::size_t start = 0;
    while (start < chars.size()) {
        std::size_t end = chars.size();
        std::string found;
        while (end > start) {
            std::string piece = start > 0 ? vocab.continuation() : std::string();
            for (std::size_t i = start; i < end; ++i) piece += chars[i];
            if (vocab.contains(piece)) {
                found = std::move(piece);
                break;
            }
            --end;
        }
        if (found.empty()) return unknown();
        t.subtokens.push_back(std::move(found));
        start = end;
    }
    t.singly = t.subtokens.size() == 1;
    return t;
}

}  // namespace namefreq
