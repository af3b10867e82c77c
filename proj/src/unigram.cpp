#include <algorithm>
#include <cmath>
#include <numeric>

#include "namefreq/tokenizers.hpp"
#include "namefreq/unicode.hpp"

namespace namefreq {

namespace {

struct Segmentation {
    std::vector<std::string> tokens;
    double score = 0.0;
};

// Maximum-score segmentation over prefixes. Among equal scores the
// segmentation with fewer tokens wins, then the lexicographically smaller
// token sequence.
template <class Lookup>
std::optional<Segmentation> viterbi(const std::vector<std::string>& chars, std::size_t max_piece_chars,
                                    Lookup&& lookup) {
    const std::size_t n = chars.size();
    std::vector<std::optional<Segmentation>> best(n + 1);
    best[0] = Segmentation{};
    for (std::size_t end = 1; end <= n; ++end) {
        std::string piece;
        const std::size_t lo = end > max_piece_chars ? end - max_piece_chars : 0;
        // Build pieces chars[start, end) for start descending.
        for (std::size_t start = end; start-- > lo;) {
            piece.insert(0, chars[start]);
            if (!best[start]) continue;
            const double* lp = lookup(piece);
            if (!lp) continue;
            const double score = best[start]->score + *lp;
            auto& cur = best[end];
            const std::size_t ntok = best[start]->tokens.size() + 1;
            bool better = !cur;
            if (!better) {
                // Sums of the same pieces in another order differ by rounding.
                const double tol = 1e-12 * std::max(1.0, std::fabs(score));
                if (std::fabs(score - cur->score) > tol) {
                    better = score > cur->score;
                } else if (ntok != cur->tokens.size()) {
                    better = ntok < cur->tokens.size();
                } else {
                    // Compare best[start] + [piece] with cur lexicographically.
                    const auto& prefix = best[start]->tokens;
                    const auto& other = cur->tokens;
                    int cmp = 0;
                    for (std::size_t i = 0; i < ntok && cmp == 0; ++i) {
                        const std::string& x = i < prefix.size() ? prefix[i] : piece;
                        cmp = x.compare(other[i]);
                    }
                    better = cmp < 0;
                }
            }
            if (better) {
                Segmentation s;
                s.tokens = best[start]->tokens;
                s.tokens.push_back(piece);
                s.score = score;
                cur = std::move(s);
            }
        }
    }
    return best[n];
}

}  // namespace

UnigramVocab::UnigramVocab(std::map<std::string, double> log_probs, std::string unk)
    : log_probs_(std::move(log_probs)), unk_(std::move(unk)) {
    for (const auto& [tok, lp] : log_probs_) {
        if (tok.empty()) throw VocabError("unigram vocabulary contains an empty token");
        if (!std::isfinite(lp) || lp > 0.0) {
            throw VocabError("unigram log-probability of '" + tok + "' must be finite and <= 0");
        }
        lookup_.emplace(tok, lp);
        max_token_chars_ = std::max(max_token_chars_, utf8::split_chars(tok).size());
    }
}

const double* UnigramVocab::find(std::string_view token) const {
    const auto it = lookup_.find(std::string(token));
    return it == lookup_.end() ? nullptr : &it->second;
}

std::optional<std::pair<std::vector<std::string>, double>> best_segmentation(
    std::string_view word, const UnigramVocab& vocab) {
    const auto chars = utf8::split_chars(word);
    if (chars.empty()) return std::nullopt;
    auto seg = viterbi(chars, vocab.max_token_chars(),
                       [&](const std::string& p) { return vocab.find(p); });
    if (!seg) return std::nullopt;
    return std::make_pair(std::move(seg->tokens), seg->score);
}

Tokenization encode_unigram(std::string_view word, const UnigramVocab& vocab) {
    Tokenization t;
    t.word = std::string(word);
    if (auto seg = best_segmentation(word, vocab)) {
        t.subtokens = std::move(seg->first);
        t.singly = t.subtokens.size() == 1;
    } else {
        t.subtokens = {vocab.unk()};
        t.unk = true;
    }
    return t;
}

UnigramVocab train_unigram(const WordCounts& word_counts, std::size_t vocab_size,
                           const UnigramTrainOptions& options) {
    struct Word {
        std::vector<std::string> chars;
        double count;
        Segmentation seg;
    };
    std::vector<Word> words;
    std::set<std::string> alphabet;
    std::map<std::string, double> seed;
    for (const auto& [w, c] : word_counts) {
        if (c == 0 || w.empty()) continue;
        Word word{utf8::split_chars(w), static_cast<double>(c), {}};
        alphabet.insert(word.chars.begin(), word.chars.end());
        for (std::size_t i = 0; i < word.chars.size(); ++i) {
            std::string piece;
            for (std::size_t j = i; j < word.chars.size() && j - i < options.max_piece_chars; ++j) {
                piece += word.chars[j];
                seed[piece] += word.count;
            }
        }
        words.push_back(std::move(word));
    }
    if (words.empty()) throw std::invalid_argument("train_unigram: empty corpus");
    if (vocab_size < alphabet.size()) {
        throw std::invalid_argument("train_unigram: vocab_size " + std::to_string(vocab_size) +
                                    " below alphabet size " + std::to_string(alphabet.size()));
    }

    std::map<std::string, double> vocab;
    double total = 0.0;
    for (const auto& [piece, freq] : seed) {
        if (alphabet.count(piece) || freq >= 2.0) {
            vocab.emplace(piece, freq);
            total += freq;
        }
    }
    for (auto& [piece, v] : vocab) v = std::log(v / total);

    auto segment_all = [&](const std::string* excluded) {
        for (auto& w : words) {
            auto seg = viterbi(w.chars, options.max_piece_chars, [&](const std::string& p) -> const double* {
                if (excluded && p == *excluded) return nullptr;
                const auto it = vocab.find(p);
                return it == vocab.end() ? nullptr : &it->second;
            });
            w.seg = std::move(*seg);  // single characters always cover the word
        }
    };

    for (;;) {
        // Hard EM: assign each word its best segmentation, re-estimate
        // piece probabilities from those counts.
        for (int it = 0; it < options.em_iterations; ++it) {
            segment_all(nullptr);
            std::unordered_map<std::string, double> counts;
            for (const auto& w : words) {
                for (const auto& t : w.seg.tokens) counts[t] += w.count;
            }
            double sum = 0.0;
            for (const auto& [piece, lp] : vocab) sum += counts[piece] + options.smoothing;
            for (auto& [piece, lp] : vocab) lp = std::log((counts[piece] + options.smoothing) / sum);
        }
        segment_all(nullptr);
        if (vocab.size() <= vocab_size) break;

        // Loss of removing a piece: increase in corpus negative
        // log-likelihood once the words using it are re-segmented.
        std::unordered_map<std::string, std::vector<std::size_t>> users;
        for (std::size_t i = 0; i < words.size(); ++i) {
            for (const auto& t : words[i].seg.tokens) users[t].push_back(i);
        }
        struct Candidate {
            std::string piece;
            double loss;
            double log_prob;
        };
        std::vector<Candidate> candidates;
        for (const auto& [piece, lp] : vocab) {
            if (alphabet.count(piece)) continue;  // single characters are never pruned
            double loss = 0.0;
            if (const auto u = users.find(piece); u != users.end()) {
                std::vector<std::size_t> idx = u->second;
                idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
                for (auto i : idx) {
                    const auto& w = words[i];
                    auto alt = viterbi(w.chars, options.max_piece_chars, [&](const std::string& p) -> const double* {
                        if (p == piece) return nullptr;
                        const auto it = vocab.find(p);
                        return it == vocab.end() ? nullptr : &it->second;
                    });
                    loss += w.count * (w.seg.score - alt->score);
                }
            }
            candidates.push_back({piece, loss, lp});
        }
        if (candidates.empty()) break;
        std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
            if (a.loss != b.loss) return a.loss < b.loss;
            if (a.log_prob != b.log_prob) return a.log_prob < b.log_prob;
            return a.piece > b.piece;
        });
        const auto fraction = static_cast<std::size_t>(options.prune_fraction * static_cast<double>(candidates.size()));
        const std::size_t k = std::min({std::max<std::size_t>(1, fraction), candidates.size(),
                                        vocab.size() - vocab_size});
        for (std::size_t i = 0; i < k; ++i) vocab.erase(candidates[i].piece);
    }

    std::map<std::string, double> out(vocab.begin(), vocab.end());
    return UnigramVocab(std::move(out));
}

}  // namespace namefreq
