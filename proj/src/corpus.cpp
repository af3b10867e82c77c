#include "namefreq/corpus.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <fstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "detail/text.hpp"
#include "namefreq/stats.hpp"
#include "namefreq/unicode.hpp"

namespace namefreq {

namespace {

enum : unsigned char { kBoundary = 0, kLetter = 1, kMultibyte = 2 };

constexpr std::array<unsigned char, 256> make_byte_classes() {
    std::array<unsigned char, 256> t{};
    for (int c = 0; c < 256; ++c) {
        if (c >= 0x80) {
            t[c] = kMultibyte;
        } else if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z')) {
            t[c] = kLetter;
        } else {
            t[c] = kBoundary;
        }
    }
    return t;
}

constexpr auto kByteClass = make_byte_classes();

bool is_ascii_boundary(unsigned char c) { return kByteClass[c] == kBoundary; }

}  // namespace

void CorpusSpec::validate() const {
    if (id.empty()) throw std::invalid_argument("corpus id must be non-empty");
    if (sources.empty()) throw std::invalid_argument("corpus '" + id + "' has no sources");
}

std::uint64_t FrequencyTable::count(const std::string& name) const {
    const auto it = counts.find(name);
    if (it == counts.end()) throw std::out_of_range("frequency table lacks name " + name);
    return it->second;
}

void FrequencyTable::write(const std::filesystem::path& path, const std::vector<std::string>& comments) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "# corpus: " << corpus_id << "\n# bytes_scanned: " << bytes_scanned << '\n';
    for (const auto& [name, c] : counts) out << name << '\t' << c << '\n';
}

FrequencyTable FrequencyTable::read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path.string(), 0, "cannot open file");
    FrequencyTable t;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (detail::trim(line).empty()) continue;
        if (line[0] == '#') {
            const auto body = detail::trim(std::string_view(line).substr(1));
            if (detail::starts_with(body, "corpus:")) {
                t.corpus_id = std::string(detail::trim(body.substr(7)));
            } else if (detail::starts_with(body, "bytes_scanned:")) {
                t.bytes_scanned = detail::parse_u64(body.substr(14)).value_or(0);
            }
            continue;
        }
        const auto f = detail::split(line, '\t');
        const auto c = f.size() == 2 ? detail::parse_u64(f[1]) : std::nullopt;
        if (!c) throw ParseError(path.string(), row, "expected 'name<TAB>count'");
        if (!t.counts.emplace(std::string(f[0]), *c).second) {
            throw ParseError(path.string(), row, "duplicate name " + std::string(f[0]));
        }
    }
    return t;
}

NameMatcher::NameMatcher(std::span<const std::string> names) : names_(names.begin(), names.end()) {
    if (names_.empty()) throw std::invalid_argument("name set is empty");
    std::sort(names_.begin(), names_.end());
    names_.erase(std::unique(names_.begin(), names_.end()), names_.end());
    min_len_ = names_.front().size();
    index_.reserve(names_.size() * 2);
    for (std::uint32_t i = 0; i < names_.size(); ++i) {
        const auto& n = names_[i];
        if (n.empty()) throw std::invalid_argument("name set contains an empty name");
        index_.emplace(std::string_view(n), i);
        min_len_ = std::min(min_len_, n.size());
        max_len_ = std::max(max_len_, n.size());
        first_byte_[static_cast<unsigned char>(n[0])] = true;
    }
}

long NameMatcher::find(std::string_view token) const {
    if (token.size() < min_len_ || token.size() > max_len_) return -1;
    if (!first_byte_[static_cast<unsigned char>(token[0])]) return -1;
    const auto it = index_.find(token);
    return it == index_.end() ? -1 : static_cast<long>(it->second);
}

void NameMatcher::count_text(std::string_view text, std::vector<std::uint64_t>& counts,
                             bool skip_leading_run) const {
    const auto* s = reinterpret_cast<const unsigned char*>(text.data());
    const std::size_t n = text.size();
    std::size_t i = 0;
    bool skip = skip_leading_run;
    while (i < n) {
        // Skip separators.
        const unsigned char c = s[i];
        const unsigned char cls = kByteClass[c];
        if (cls == kBoundary) {
            skip = false;
            ++i;
            continue;
        }
        if (cls == kMultibyte) {
            const auto d = utf8::decode(text, i);
            if (!utf8::is_letter(d.cp)) {
                skip = false;
                i += d.len;
                continue;
            }
        }
        // Letter run.
        const std::size_t begin = i;
        while (i < n) {
            const unsigned char b = s[i];
            const unsigned char k = kByteClass[b];
            if (k == kLetter) {
                ++i;
            } else if (k == kBoundary) {
                break;
            } else {
                const auto d = utf8::decode(text, i);
                if (!utf8::is_letter(d.cp)) break;
                i += d.len;
            }
        }
        if (skip) {
            skip = false;
            continue;
        }
        const long idx = find(text.substr(begin, i - begin));
        if (idx >= 0) ++counts[static_cast<std::size_t>(idx)];
    }
}

StreamScanner::StreamScanner(const NameMatcher& matcher, std::vector<std::uint64_t>& counts,
                             std::size_t block_size)
    : matcher_(matcher), counts_(counts), block_size_(std::max<std::size_t>(block_size, 64)) {
    pending_.reserve(block_size_ + block_size_ / 4);
}

void StreamScanner::feed(std::string_view bytes) {
    while (!bytes.empty()) {
        // At least half a block of fresh bytes per process() call keeps the
        // total work linear when a long letter run is carried over.
        const std::size_t room = block_size_ > pending_.size() ? block_size_ - pending_.size() : 0;
        const std::size_t take = std::min(std::max(room, block_size_ / 2), bytes.size());
        pending_.append(bytes.substr(0, take));
        bytes.remove_prefix(take);
        if (pending_.size() >= block_size_) process(false);
    }
}

void StreamScanner::finish() { process(true); }

void StreamScanner::process(bool final) {
    if (final) {
        matcher_.count_text(pending_, counts_, skip_leading_);
        pending_.clear();
        skip_leading_ = false;
        return;
    }
    const std::string_view buf = pending_;
    const auto* s = reinterpret_cast<const unsigned char*>(buf.data());

    // Fast path: the last ASCII separator byte is always a safe cut.
    std::size_t cut = 0;
    for (std::size_t i = buf.size(); i > 0; --i) {
        if (is_ascii_boundary(s[i - 1])) {
            cut = i;
            break;
        }
    }
    std::size_t carry_from = cut;
    if (cut == 0) {
        // No ASCII separator at all: look for a complete non-letter code
        // point, ignoring a possibly truncated sequence at the very end.
        std::size_t i = 0;
        std::size_t incomplete_at = buf.size();
        while (i < buf.size()) {
            const auto d = utf8::decode(buf, i);
            if (d.cp == utf8::kInvalid && i + 4 > buf.size() && (s[i] & 0xC0) == 0xC0) {
                incomplete_at = i;
                break;
            }
            if (!utf8::is_letter(d.cp)) cut = i + d.len;
            i += d.len;
        }
        carry_from = cut;
        if (cut == 0) {
            // One letter run longer than the block: it cannot match any
            // name. Drop it and keep skipping until the next separator.
            pending_.erase(0, incomplete_at);
            skip_leading_ = true;
            return;
        }
    }
    matcher_.count_text(buf.substr(0, cut), counts_, skip_leading_);
    skip_leading_ = false;
    pending_.erase(0, carry_from);
}

double ScanReport::megabytes_per_second() const {
    if (seconds <= 0.0) return 0.0;
    return static_cast<double>(table.bytes_scanned) / 1e6 / seconds;
}

namespace {

struct ByteRange {
    std::size_t source;
    std::uint64_t begin;
    std::uint64_t end;
};

// Moves `pos` forward to just past the next byte that is a safe cut for the
// source kind: an ASCII separator for plain text, a newline for records.
std::uint64_t align_cut(std::ifstream& in, std::uint64_t pos, std::uint64_t size, SourceKind kind) {
    in.clear();
    in.seekg(static_cast<std::streamoff>(pos));
    char buf[4096];
    while (pos < size) {
        in.read(buf, sizeof buf);
        const auto got = static_cast<std::size_t>(in.gcount());
        if (got == 0) break;
        for (std::size_t i = 0; i < got; ++i) {
            const auto c = static_cast<unsigned char>(buf[i]);
            const bool ok = kind == SourceKind::JsonLines ? c == '\n' : is_ascii_boundary(c);
            if (ok) return pos + i + 1;
        }
        pos += got;
    }
    return size;
}

void scan_plain_range(const CorpusSource& src, const ByteRange& r, const NameMatcher& matcher,
                      std::vector<std::uint64_t>& counts, std::size_t block_size) {
    std::ifstream in(src.path, std::ios::binary);
    in.seekg(static_cast<std::streamoff>(r.begin));
    StreamScanner scanner(matcher, counts, block_size);
    std::vector<char> buf(block_size);
    std::uint64_t left = r.end - r.begin;
    while (left > 0) {
        const auto want = static_cast<std::streamsize>(std::min<std::uint64_t>(left, buf.size()));
        in.read(buf.data(), want);
        const auto got = in.gcount();
        if (got <= 0) break;
        scanner.feed(std::string_view(buf.data(), static_cast<std::size_t>(got)));
        left -= static_cast<std::uint64_t>(got);
    }
    scanner.finish();
}

void scan_jsonl_range(const CorpusSource& src, const ByteRange& r, const std::string& field,
                      const NameMatcher& matcher, std::vector<std::uint64_t>& counts) {
    std::ifstream in(src.path, std::ios::binary);
    in.seekg(static_cast<std::streamoff>(r.begin));
    std::uint64_t pos = r.begin;
    std::string line;
    while (pos < r.end && std::getline(in, line)) {
        pos += line.size() + 1;
        if (detail::trim(line).empty()) continue;
        // Malformed records and records without the field are skipped.
        auto doc = nlohmann::json::parse(line, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) continue;
        const auto it = doc.find(field);
        if (it == doc.end() || !it->is_string()) continue;
        matcher.count_text(it->get_ref<const std::string&>(), counts);
    }
}

}  // namespace

ScanReport scan(const CorpusSpec& corpus, std::span<const std::string> names,
                const ScanOptions& options) {
    corpus.validate();
    const NameMatcher matcher(names);
    const unsigned jobs = std::max(1u, options.jobs);
    const auto start = std::chrono::steady_clock::now();

    ScanReport report;
    report.table.corpus_id = corpus.id;

    std::vector<ByteRange> ranges;
    for (std::size_t s = 0; s < corpus.sources.size(); ++s) {
        const auto& src = corpus.sources[s];
        std::ifstream in(src.path, std::ios::binary);
        std::error_code ec;
        const auto size = std::filesystem::file_size(src.path, ec);
        if (!in || ec || std::filesystem::is_directory(src.path)) {
            report.warnings.push_back("unreadable source: " + src.path.string());
            continue;
        }
        report.table.bytes_scanned += size;
        std::uint64_t begin = 0;
        for (unsigned k = 1; k <= jobs && begin < size; ++k) {
            std::uint64_t end = k == jobs ? size : std::max(begin, size * k / jobs);
            if (end < size) end = align_cut(in, end, size, src.kind);
            if (end > begin) ranges.push_back({s, begin, end});
            begin = end;
        }
    }

    auto run = [&](unsigned worker, std::vector<std::uint64_t>& counts) {
        for (std::size_t i = worker; i < ranges.size(); i += jobs) {
            const auto& r = ranges[i];
            const auto& src = corpus.sources[r.source];
            if (src.kind == SourceKind::JsonLines) {
                scan_jsonl_range(src, r, corpus.text_field, matcher, counts);
            } else {
                scan_plain_range(src, r, matcher, counts, options.block_size);
            }
        }
    };

    std::vector<std::vector<std::uint64_t>> partial(jobs, std::vector<std::uint64_t>(matcher.size(), 0));
    if (jobs == 1) {
        run(0, partial[0]);
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(run, w, std::ref(partial[w]));
        for (auto& t : threads) t.join();
    }

    for (std::size_t i = 0; i < matcher.size(); ++i) {
        std::uint64_t total = 0;
        for (const auto& p : partial) total += p[i];
        report.table.counts.emplace(matcher.names()[i], total);
    }
    report.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

FrequencyTable merge(std::span<const FrequencyTable> tables, std::string composite_id) {
    if (tables.empty()) throw std::invalid_argument("merge: no tables");
    FrequencyTable out = tables.front();
    std::string joined = tables.front().corpus_id;
    for (std::size_t t = 1; t < tables.size(); ++t) {
        const auto& other = tables[t];
        if (other.counts.size() != out.counts.size() ||
            !std::equal(other.counts.begin(), other.counts.end(), out.counts.begin(),
                        [](const auto& a, const auto& b) { return a.first == b.first; })) {
            throw std::invalid_argument("merge: tables '" + out.corpus_id + "' and '" +
                                        other.corpus_id + "' cover different name sets");
        }
        auto it = out.counts.begin();
        for (const auto& [name, c] : other.counts) (it++)->second += c;
        out.bytes_scanned += other.bytes_scanned;
        joined += "+" + other.corpus_id;
    }
    out.corpus_id = composite_id.empty() ? joined : std::move(composite_id);
    return out;
}

std::map<DemographicGroup, double> median_by_group(const Registry& registry,
                                                   const FrequencyTable& table) {
    std::map<DemographicGroup, std::vector<double>> values;
    for (const auto& r : registry.records()) {
        const auto it = table.counts.find(r.name);
        if (it == table.counts.end()) {
            throw std::invalid_argument("frequency table '" + table.corpus_id + "' lacks name " + r.name);
        }
        if (r.group) values[*r.group].push_back(static_cast<double>(it->second));
    }
    std::map<DemographicGroup, double> out;
    for (auto g : kReportGroups) {
        const auto it = values.find(g);
        if (it == values.end()) {
            throw std::invalid_argument("median_by_group: group " + to_string(g) + " has no names");
        }
        out[g] = median(it->second);
    }
    return out;
}

}  // namespace namefreq
