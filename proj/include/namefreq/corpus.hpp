#pragma once

// Single-pass name counting over large corpora.
//
// A word token is a maximal run of Unicode letters; everything else
// (digits, punctuation, apostrophes, hyphens, whitespace, malformed UTF-8)
// separates tokens. A name is counted when a token equals its normal form
// exactly (case-sensitive). Source boundaries are token boundaries.

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "namefreq/names.hpp"

namespace namefreq {

enum class SourceKind { PlainText, JsonLines };

struct CorpusSource {
    std::filesystem::path path;
    SourceKind kind = SourceKind::PlainText;
};

struct CorpusSpec {
    std::string id;
    std::vector<CorpusSource> sources;
    // Field holding the text of each record in JsonLines sources.
    std::string text_field = "text";

    void validate() const;
};

struct FrequencyTable {
    std::string corpus_id;
    std::map<std::string, std::uint64_t> counts;
    std::uint64_t bytes_scanned = 0;

    std::uint64_t count(const std::string& name) const;
    bool operator==(const FrequencyTable&) const = default;

    // `comments` are written as leading '# ' lines; read() skips them.
    void write(const std::filesystem::path& path, const std::vector<std::string>& comments = {}) const;
    static FrequencyTable read(const std::filesystem::path& path);
};

// Exact-match lookup of word tokens against a fixed name set. Immutable
// after construction; count_text() may be called concurrently with
// separate count vectors.
class NameMatcher {
public:
    explicit NameMatcher(std::span<const std::string> names);

    std::size_t size() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }

    // Counts tokens of a block whose two ends are token boundaries. With
    // `skip_leading_run`, a letter run starting at offset 0 is ignored
    // (it continues a token already discarded).
    void count_text(std::string_view text, std::vector<std::uint64_t>& counts,
                    bool skip_leading_run = false) const;

    // Index of `token` in names(), or -1.
    long find(std::string_view token) const;

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string_view, std::uint32_t> index_;
    std::size_t min_len_ = 0;
    std::size_t max_len_ = 0;
    bool first_byte_[256] = {};
};

// Incremental scanner for one byte stream. Tokens split across feed()
// calls are reassembled; memory is bounded by the block size.
class StreamScanner {
public:
    StreamScanner(const NameMatcher& matcher, std::vector<std::uint64_t>& counts,
                  std::size_t block_size = 1 << 20);

    void feed(std::string_view bytes);
    void finish();

private:
    void process(bool final);

    const NameMatcher& matcher_;
    std::vector<std::uint64_t>& counts_;
    std::size_t block_size_;
    std::string pending_;
    bool skip_leading_ = false;
};

struct ScanOptions {
    unsigned jobs = 1;
    std::size_t block_size = 1 << 20;
};

struct ScanReport {
    FrequencyTable table;
    std::vector<std::string> warnings;  // one per unreadable source
    double seconds = 0.0;

    double megabytes_per_second() const;
};

ScanReport scan(const CorpusSpec& corpus, std::span<const std::string> names,
                const ScanOptions& options = {});

// Entrywise sum. The composite id defaults to the input ids joined by '+'.
FrequencyTable merge(std::span<const FrequencyTable> tables, std::string composite_id = {});

std::map<DemographicGroup, double> median_by_group(const Registry& registry,
                                                   const FrequencyTable& table);

}  // namespace namefreq
