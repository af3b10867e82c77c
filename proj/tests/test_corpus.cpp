#include <doctest.h>

#include "namefreq/corpus.hpp"
#include "namefreq/unicode.hpp"
#include "support.hpp"

using namespace namefreq;
using testing_util::TempDir;
using testing_util::write_file;

namespace {

CorpusSpec plain(const std::string& id, std::vector<std::filesystem::path> files) {
    CorpusSpec c;
    c.id = id;
    for (auto& f : files) c.sources.push_back({f, SourceKind::PlainText});
    return c;
}

std::map<std::string, std::uint64_t> scan_text(const std::string& text, const std::vector<std::string>& names,
                                               ScanOptions opt = {}) {
    TempDir dir("scan");
    write_file(dir / "c.txt", text);
    return scan(plain("c", {dir / "c.txt"}), names, opt).table.counts;
}

std::string random_text(std::mt19937_64& rng, std::size_t bytes, const std::vector<std::string>& names) {
    const char* fillers[] = {"the", "a", "Annaa", "anna", "ANNA", "met", "O'Neil", "x-ray", "é", "Zoë", "bob",
                             "José", "naïve", "12", "Ann", "nna"};
    const char* seps[] = {" ", "  ", ", ", ". ", "\n", "'", "-", "\t", "3", "; ", "\xC3\x97"};
    std::string out;
    while (out.size() < bytes) {
        if (rng() % 3 == 0) out += names[rng() % names.size()];
        else out += fillers[rng() % std::size(fillers)];
        out += seps[rng() % std::size(seps)];
    }
    return out;
}

}  // namespace

TEST_CASE("exact case-sensitive matching") {
    auto c = scan_text("Anna met Anna and bob.", {"Anna", "Bob"});
    CHECK(c["Anna"] == 2);
    CHECK(c["Bob"] == 0);
    CHECK(scan_text("Anna, Anna; ANNA", {"Anna"})["Anna"] == 2);
    CHECK(scan_text("", {"Anna"})["Anna"] == 0);
    CHECK(scan_text("O'Neil Neil Neil's Jean-Luc Luc", {"Neil", "Luc", "Jean"}) ==
          std::map<std::string, std::uint64_t>{{"Jean", 1}, {"Luc", 2}, {"Neil", 3}});
    CHECK(scan_text("José Josée Jos", {"José", "Jos"}) == std::map<std::string, std::uint64_t>{{"Jos", 1}, {"José", 1}});
    CHECK(scan_text("Anna2Anna", {"Anna"})["Anna"] == 2);
}

TEST_CASE("matches naive reference scanner") {
    std::mt19937_64 rng(101);
    const std::vector<std::string> names{"Anna", "Bob", "José", "Zoë", "Neil", "An"};
    for (int t = 0; t < 30; ++t) {
        const auto text = random_text(rng, 2000 + 997 * t, names);
        const auto expected = oracle::naive_scan(text, names);
        CHECK(scan_text(text, names) == expected);
        CHECK(scan_text(text, names, {3, 64}) == expected);
    }
}

TEST_CASE("shard and block decomposition does not change counts") {
    std::mt19937_64 rng(7);
    const std::vector<std::string> names{"Anna", "Bob", "José", "Zoë"};
    TempDir dir("shards");
    std::vector<std::filesystem::path> files;
    std::string all;
    for (int i = 0; i < 3; ++i) {
        auto text = random_text(rng, 50000, names);
        files.push_back(dir / ("p" + std::to_string(i) + ".txt"));
        write_file(files.back(), text);
        all += text + "\n";
    }
    const auto spec = plain("c", files);
    const auto one = scan(spec, names, {1, 1 << 20}).table;
    for (unsigned jobs : {1u, 2u, 8u}) {
        for (std::size_t block : {std::size_t{7}, std::size_t{100}, std::size_t{4096}}) {
            CHECK(scan(spec, names, {jobs, block}).table == one);
        }
    }
    // separate sources are token boundaries, so concatenation with a newline matches
    CHECK(scan_text(all, names) == one.counts);

    // scanning pieces separately and merging equals the whole
    std::vector<FrequencyTable> parts;
    for (const auto& f : files) parts.push_back(scan(plain("p", {f}), names).table);
    CHECK(merge(parts).counts == one.counts);

    std::uint64_t total = 0, tokens = 0;
    for (auto& [n, v] : one.counts) total += v;
    tokens = utf8::letter_runs(all).size();
    CHECK(total <= tokens);
}

TEST_CASE("stream scanner reassembles tokens across feeds") {
    std::mt19937_64 rng(3);
    const std::vector<std::string> names{"Anna", "José"};
    const NameMatcher matcher(names);
    for (int t = 0; t < 20; ++t) {
        const auto text = random_text(rng, 5000, names);
        std::vector<std::uint64_t> counts(names.size());
        StreamScanner s(matcher, counts, 16);
        for (std::size_t pos = 0; pos < text.size();) {
            const std::size_t len = 1 + rng() % 23;
            s.feed(std::string_view(text).substr(pos, len));
            pos += len;
        }
        s.finish();
        const auto expected = oracle::naive_scan(text, names);
        CHECK(counts[0] == expected.at(matcher.names()[0]));
        CHECK(counts[1] == expected.at(matcher.names()[1]));
    }
}

TEST_CASE("json lines sources") {
    TempDir dir("jsonl");
    write_file(dir / "c.jsonl",
               "{\"text\": \"Anna met Bob.\", \"url\": \"Anna\"}\n"
               "{\"text\": \"Anna\\nAnna\\u00e9 Jos\\u00e9\"}\n"
               "\n");
    CorpusSpec spec{"j", {{dir / "c.jsonl", SourceKind::JsonLines}}, "text"};
    const auto t = scan(spec, std::vector<std::string>{"Anna", "Bob", "José"}).table;
    CHECK(t.counts.at("Anna") == 2);
    CHECK(t.counts.at("Bob") == 1);
    CHECK(t.counts.at("José") == 1);
    CHECK(scan(spec, std::vector<std::string>{"Anna"}, {4, 8}).table.counts == std::map<std::string, std::uint64_t>{{"Anna", 2}});
}

TEST_CASE("unreadable sources become warnings") {
    TempDir dir("warn");
    write_file(dir / "ok.txt", "Anna");
    const auto r = scan(plain("c", {dir / "ok.txt", dir / "missing.txt"}), std::vector<std::string>{"Anna"});
    CHECK(r.warnings.size() == 1);
    CHECK(r.table.counts.at("Anna") == 1);
}

TEST_CASE("merge") {
    FrequencyTable a{"a", {{"Anna", 2}}, 10};
    FrequencyTable b{"b", {{"Anna", 3}}, 5};
    const auto m = merge(std::vector<FrequencyTable>{a, b});
    CHECK(m.counts.at("Anna") == 5);
    CHECK(m.corpus_id == "a+b");
    CHECK(merge(std::vector<FrequencyTable>{a}, "a").counts == a.counts);

    std::mt19937_64 rng(12);
    std::vector<FrequencyTable> tables(3);
    for (int i = 0; i < 3; ++i) {
        tables[i].corpus_id = "t" + std::to_string(i);
        for (const char* n : {"Anna", "Bob", "Cy", "Di"}) tables[i].counts[n] = rng() % 1000;
    }
    const auto abc = merge(tables, "x");
    std::vector<FrequencyTable> perm{tables[2], tables[0], tables[1]};
    CHECK(merge(perm, "x") == abc);
    const auto ab = merge(std::vector<FrequencyTable>{tables[0], tables[1]}, "ab");
    CHECK(merge(std::vector<FrequencyTable>{ab, tables[2]}, "x").counts == abc.counts);
}

TEST_CASE("group medians") {
    std::vector<NameRecord> recs;
    FrequencyTable t{"c", {}, 0};
    auto add = [&](const std::string& n, DemographicGroup g, std::uint64_t f) {
        NameRecord r;
        r.name = n;
        r.group = g;
        recs.push_back(r);
        t.counts[n] = f;
    };
    add("A1", DemographicGroup::WM, 219);
    add("A2", DemographicGroup::WM, 1191);
    add("A3", DemographicGroup::WM, 274);
    int i = 0;
    for (auto g : kReportGroups) {
        if (g != DemographicGroup::WM) add("S" + std::to_string(i++), g, 42);
    }
    const auto med = median_by_group(Registry(recs), t);
    CHECK(med.at(DemographicGroup::WM) == 274);
    CHECK(med.at(DemographicGroup::AF) == 42);

    t.counts.erase("S0");
    CHECK_THROWS_AS(median_by_group(Registry(recs), t), std::invalid_argument);
}

TEST_CASE("frequency table file round trip") {
    TempDir dir("ft");
    FrequencyTable t{"c4", {{"Anna", 7}, {"José", 0}}, 1234};
    t.write(dir / "f.tsv", {"note"});
    CHECK(FrequencyTable::read(dir / "f.tsv") == t);
}
