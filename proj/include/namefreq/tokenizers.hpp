#pragma once

// Subword tokenization: trainers and encoders for byte-pair encoding,
// WordPiece and Unigram, loaders for published vocabulary files, and
// single-tokenization rates per demographic group.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "namefreq/names.hpp"

namespace namefreq {

enum class Scheme { Bpe, WordPiece, Unigram };

std::string to_string(Scheme s);
Scheme parse_scheme(std::string_view s);

class VocabError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Tokenization {
    std::string word;
    std::vector<std::string> subtokens;
    // Exactly one subtoken that is not the unknown token.
    bool singly = false;
    bool unk = false;
};

using WordCounts = std::map<std::string, std::uint64_t>;

// ---------------------------------------------------------------------------
// Byte-pair encoding

class BpeVocab {
public:
    using Merge = std::pair<std::string, std::string>;

    struct Options {
        // Separate end-of-word symbol appended to every word; empty for
        // byte-level vocabularies, which have none.
        std::string end_marker;
        // Map input bytes through the GPT-2 byte-to-unicode table.
        bool byte_level = false;
        // Characters outside the alphabet become <0xHH> byte tokens
        // instead of the unknown token.
        bool byte_fallback = false;
    };

    // Throws VocabError when a merge uses a symbol that is neither in the
    // alphabet nor produced by an earlier merge.
    BpeVocab(std::set<std::string> alphabet, std::vector<Merge> merges, Options options);

    const std::set<std::string>& alphabet() const { return alphabet_; }
    const std::vector<Merge>& merges() const { return merges_; }
    const Options& options() const { return options_; }
    std::size_t size() const { return symbols_.size(); }
    bool contains(const std::string& symbol) const { return symbols_.count(symbol) > 0; }
    std::optional<std::size_t> rank(const std::string& left, const std::string& right) const;

private:
    std::set<std::string> alphabet_;
    std::vector<Merge> merges_;
    Options options_;
    std::set<std::string> symbols_;
    std::unordered_map<std::string, std::size_t> rank_;
};

struct BpeTrainOptions {
    std::string end_marker = "</w>";
    // Training stops once the most frequent pair occurs fewer times.
    std::uint64_t min_pair_count = 2;
};

BpeVocab train_bpe(const WordCounts& word_counts, std::size_t vocab_size,
                   const BpeTrainOptions& options = {});
Tokenization encode_bpe(std::string_view word, const BpeVocab& vocab);

// The GPT-2 byte-to-unicode table: printable bytes map to themselves, the
// rest to code points from U+0100 upward.
const std::vector<std::string>& byte_level_alphabet();

// ---------------------------------------------------------------------------
// WordPiece

class WordPieceVocab {
public:
    explicit WordPieceVocab(std::set<std::string> tokens, std::string continuation = "##",
                            std::string unk = "[UNK]");

    const std::set<std::string>& tokens() const { return tokens_; }
    const std::string& continuation() const { return continuation_; }
    const std::string& unk() const { return unk_; }
    bool contains(const std::string& t) const { return tokens_.count(t) > 0; }
    std::size_t size() const { return tokens_.size(); }
    // Words longer than this (in code points) encode as the unknown token.
    std::size_t max_input_chars = 100;

    // Single characters that appear inside some token but have no token of
    // their own (neither "c" nor "##c").
    std::vector<std::string> missing_characters() const;

private:
    std::set<std::string> tokens_;
    std::string continuation_;
    std::string unk_;
};

WordPieceVocab train_wordpiece(const WordCounts& word_counts, std::size_t vocab_size);
Tokenization encode_wordpiece(std::string_view word, const WordPieceVocab& vocab);

// ---------------------------------------------------------------------------
// Unigram

class UnigramVocab {
public:
    // Throws VocabError for non-finite or positive log-probabilities.
    explicit UnigramVocab(std::map<std::string, double> log_probs, std::string unk = "<unk>");

    const std::map<std::string, double>& log_probs() const { return log_probs_; }
    const std::string& unk() const { return unk_; }
    std::size_t size() const { return log_probs_.size(); }
    std::size_t max_token_chars() const { return max_token_chars_; }
    const double* find(std::string_view token) const;

private:
    std::map<std::string, double> log_probs_;
    std::unordered_map<std::string, double> lookup_;
    std::string unk_;
    std::size_t max_token_chars_ = 1;
};

struct UnigramTrainOptions {
    std::size_t max_piece_chars = 16;
    double prune_fraction = 0.2;
    int em_iterations = 2;
    // Additive smoothing on hard-EM counts keeps unused pieces finite.
    double smoothing = 0.1;
};

UnigramVocab train_unigram(const WordCounts& word_counts, std::size_t vocab_size,
                           const UnigramTrainOptions& options = {});
Tokenization encode_unigram(std::string_view word, const UnigramVocab& vocab);

// Best segmentation and its log-probability (no UNK handling); nullopt if
// some position cannot be covered.
std::optional<std::pair<std::vector<std::string>, double>> best_segmentation(
    std::string_view word, const UnigramVocab& vocab);

// ---------------------------------------------------------------------------

class SubwordVocab {
public:
    using Variant = std::variant<BpeVocab, WordPieceVocab, UnigramVocab>;
    SubwordVocab(BpeVocab v) : v_(std::move(v)) {}        // NOLINT(google-explicit-constructor)
    SubwordVocab(WordPieceVocab v) : v_(std::move(v)) {}  // NOLINT(google-explicit-constructor)
    SubwordVocab(UnigramVocab v) : v_(std::move(v)) {}    // NOLINT(google-explicit-constructor)

    Scheme scheme() const;
    const Variant& get() const { return v_; }
    std::size_t size() const;

private:
    Variant v_;
};

Tokenization encode(std::string_view word, const SubwordVocab& vocab);

// Concatenation of subtokens with scheme markers removed; equals the
// encoder input unless the tokenization contains the unknown token.
std::string detokenize(const Tokenization& t, const SubwordVocab& vocab);

struct LoadOptions {
    // BPE only. Defaults to byte-level unless the merges file declares an
    // end-of-word symbol.
    std::optional<bool> byte_level;
};

// WordPiece: one token per line. BPE: vocabulary (JSON object token->id or
// one token per line) followed by the merges file. Unigram: one
// "token<TAB>log-prob" pair per line.
SubwordVocab load_pretrained(const std::vector<std::filesystem::path>& paths, Scheme scheme,
                             const LoadOptions& options = {});

// Writes the vocabulary in the formats load_pretrained reads; returns the
// written paths in load order.
std::vector<std::filesystem::path> write_vocab(const SubwordVocab& vocab,
                                               const std::filesystem::path& dir);

enum class SpacePolicy { Bare, LeadingSpace };

std::string to_string(SpacePolicy p);
SpacePolicy parse_space_policy(std::string_view s);

// Leading-space for byte-level BPE, bare otherwise.
SpacePolicy default_space_policy(const SubwordVocab& vocab);

// The string handed to the encoder for a word under a space policy.
std::string encoder_input(std::string_view word, const SubwordVocab& vocab, SpacePolicy policy);

Tokenization tokenize_word(std::string_view word, const SubwordVocab& vocab, SpacePolicy policy);

std::map<DemographicGroup, double> single_rate_by_group(const Registry& registry,
                                                        const SubwordVocab& vocab,
                                                        SpacePolicy policy);

}  // namespace namefreq
