#pragma once

// Context harvesting around a pivot name, name substitution, and the
// bleached carrier sentences used for bias extraction.

#include <cstddef>
#include <filesystem>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "namefreq/corpus.hpp"

namespace namefreq {

inline constexpr std::string_view kPlaceholder = "\xE2\x9F\xA8name\xE2\x9F\xA9";  // ⟨name⟩

// Spans are in Unicode code points, the indexing used by the extractor.
struct ContextTemplate {
    std::string text;
    std::string source;
    std::size_t slot_begin = 0;
    std::size_t slot_end = 0;

    // Throws std::invalid_argument unless the text holds exactly one
    // placeholder and the slot span covers it.
    void validate() const;
    bool operator==(const ContextTemplate&) const = default;
};

ContextTemplate make_template(std::string text, std::string source);

struct ContextSet {
    std::string pivot;
    std::vector<ContextTemplate> templates;

    std::size_t k() const { return templates.size(); }
    bool operator==(const ContextSet&) const = default;

    // One JSON record per line: {"pivot", "source", "text", "slot": [b, e]}.
    void write(const std::filesystem::path& path) const;
    static ContextSet read(const std::filesystem::path& path);
};

class HarvestError : public std::runtime_error {
public:
    HarvestError(const std::string& what, std::size_t found)
        : std::runtime_error(what), found_(found) {}
    std::size_t found() const { return found_; }

private:
    std::size_t found_;
};

struct HarvestOptions {
    std::size_t max_tokens = 64;
};

// Sentences end at '.', '!' or '?' followed by whitespace, and at line
// (plain text) or record (JSON lines) boundaries.
std::vector<std::string> split_sentences(std::string_view text);

// First k distinct sentences, in source order, in which the pivot occurs
// exactly once as a word token. A sentence is dropped when the pivot is
// followed by a token t such that "pivot t" is blocklisted.
ContextSet harvest(const CorpusSpec& corpus, std::string_view pivot, std::size_t k,
                   const std::set<std::string>& blocklist, const HarvestOptions& options = {});

std::set<std::string> load_blocklist(const std::filesystem::path& path);

std::string substitute(const ContextTemplate& t, std::string_view name);

// "This person's name is <name>."
std::string bleached_name_template(std::string_view name);
// "This is <word>."
std::string bleached_word_template(std::string_view word);

// One line of the extractor's sentences file. start/end delimit `word`
// inside `text` in code points.
struct ExtractorSentence {
    std::string set;  // "contexts" or "bleached"
    std::string word;
    std::string text;
    std::size_t start = 0;
    std::size_t end = 0;
    bool operator==(const ExtractorSentence&) const = default;
};

std::vector<ExtractorSentence> context_sentences(const ContextSet& contexts,
                                                 const std::vector<std::string>& names);
ExtractorSentence bleached_name_sentence(std::string_view name);
ExtractorSentence bleached_word_sentence(std::string_view word);

void write_sentences(const std::filesystem::path& path, const std::vector<ExtractorSentence>& sentences);
std::vector<ExtractorSentence> read_sentences(const std::filesystem::path& path);

// Code point count of a UTF-8 string.
std::size_t char_length(std::string_view s);

}  // namespace namefreq
