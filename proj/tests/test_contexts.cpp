#include <doctest.h>

#include "namefreq/contexts.hpp"
#include "namefreq/unicode.hpp"
#include "support.hpp"

using namespace namefreq;
using testing_util::TempDir;
using testing_util::write_file;

namespace {

const std::string kSlot(kPlaceholder);

CorpusSpec corpus_of(const TempDir& dir, const std::string& text, SourceKind kind = SourceKind::PlainText) {
    const auto p = dir / (kind == SourceKind::PlainText ? "c.txt" : "c.jsonl");
    write_file(p, text);
    return CorpusSpec{"c", {{p, kind}}, "text"};
}

// Byte range where two equal-length-prefix strings differ.
std::pair<std::size_t, std::size_t> diff_span(const std::string& a, const std::string& b) {
    std::size_t lo = 0;
    while (lo < a.size() && lo < b.size() && a[lo] == b[lo]) ++lo;
    std::size_t ea = a.size(), eb = b.size();
    while (ea > lo && eb > lo && a[ea - 1] == b[eb - 1]) --ea, --eb;
    return {lo, ea};
}

}  // namespace

TEST_CASE("sentence splitting") {
    CHECK(split_sentences("I saw Taylor. Then I left!  Why? ok") ==
          std::vector<std::string>{"I saw Taylor.", "Then I left!", "Why?", "ok"});
    CHECK(split_sentences("Version 2.5 is out.") == std::vector<std::string>{"Version 2.5 is out."});
    CHECK(split_sentences("   ").empty());
}

TEST_CASE("harvest builds templates around the pivot") {
    TempDir dir("harvest");
    const auto c = corpus_of(dir,
                             "I saw Taylor last week. Taylor Swift released an album\n"
                             "Taylor and Taylor met. We called taylor.\n"
                             "I saw Taylor last week.\n"
                             "Yesterday Taylor swam.\n");
    const auto set = harvest(c, "Taylor", 2, {"Taylor Swift"});
    REQUIRE(set.k() == 2);
    CHECK(set.pivot == "Taylor");
    CHECK(set.templates[0].text == "I saw " + kSlot + " last week.");
    CHECK(set.templates[0].source == "c.txt:1");
    CHECK(set.templates[0].slot_begin == 6);
    CHECK(set.templates[0].slot_end == 12);
    CHECK(set.templates[1].text == "Yesterday " + kSlot + " swam.");
    CHECK(set.templates[1].source == "c.txt:4");
    for (const auto& t : set.templates) CHECK_NOTHROW(t.validate());

    CHECK(harvest(c, "Taylor", 2, {"Taylor Swift"}) == set);

    try {
        harvest(c, "Taylor", 3, {"Taylor Swift"});
        FAIL("expected HarvestError");
    } catch (const HarvestError& e) {
        CHECK(e.found() == 2);
    }
    // without the blocklist the public-figure sentence is kept
    CHECK(harvest(c, "Taylor", 3, {}).templates[1].text == kSlot + " Swift released an album");
}

TEST_CASE("harvest limits") {
    TempDir dir("limits");
    std::string long_sentence = "Taylor";
    for (int i = 0; i < 70; ++i) long_sentence += " word";
    const auto c = corpus_of(dir, long_sentence + ".\nTaylor, swift as ever.\n");
    const auto set = harvest(c, "Taylor", 1, {"Taylor Swift"});
    CHECK(set.templates[0].text == kSlot + ", swift as ever.");
    CHECK(set.templates[0].source == "c.txt:2");
    HarvestOptions loose;
    loose.max_tokens = 100;
    CHECK(harvest(c, "Taylor", 1, {}, loose).templates[0].source == "c.txt:1");
    CHECK_THROWS(harvest(c, "Taylor", 0, {}));
}

TEST_CASE("harvest json lines") {
    TempDir dir("hjson");
    const auto c = corpus_of(dir, "{\"text\": \"Hi. I met Taylor in Zürich.\"}\n{\"other\": 1}\n", SourceKind::JsonLines);
    const auto set = harvest(c, "Taylor", 1, {});
    CHECK(set.templates[0].text == "I met " + kSlot + " in Zürich.");
    CHECK(set.templates[0].source == "c.jsonl:1");
}

TEST_CASE("substitution") {
    const auto t = make_template("I saw " + kSlot + " last week.", "x");
    CHECK(substitute(t, "Latisha") == "I saw Latisha last week.");
    CHECK(substitute(t, "Taylor") == "I saw Taylor last week.");

    const auto u = make_template("Über " + kSlot + " ist hier.", "y");
    CHECK(u.slot_begin == 5);
    const auto a = substitute(u, "José");
    const auto b = substitute(u, "Mei");
    const auto [lo, hi] = diff_span(a, b);
    const auto prefix = std::string("Über ").size();
    CHECK(lo >= prefix);
    CHECK(a.substr(0, prefix) == b.substr(0, prefix));
    CHECK(a.substr(prefix + std::string("José").size()) == b.substr(prefix + 3));
    CHECK(hi <= prefix + std::string("José").size());

    CHECK_THROWS(make_template("no slot here", "z"));
    CHECK_THROWS(make_template(kSlot + " and " + kSlot, "z"));
}

TEST_CASE("bleached templates") {
    CHECK(bleached_name_template("Anna") == "This person's name is Anna.");
    CHECK(bleached_name_template("José") == "This person's name is José.");
    CHECK_THROWS(bleached_name_template(""));
    CHECK(bleached_word_template("joy") == "This is joy.");
    CHECK(bleached_word_template("family values") == "This is family values.");
    CHECK_THROWS(bleached_word_template(""));
}

TEST_CASE("extractor sentences") {
    const auto s = bleached_name_sentence("José");
    CHECK(s.set == "bleached");
    CHECK(s.text == "This person's name is José.");
    CHECK(s.start == 22);
    CHECK(s.end == 26);
    const auto w = bleached_word_sentence("joy");
    CHECK(w.start == 8);
    CHECK(w.end == 11);

    ContextSet set{"Taylor",
                   {make_template("I saw " + kSlot + " last week.", "a:1"), make_template("Ça va, " + kSlot + "?", "a:2")}};
    const std::vector<std::string> names{"Ana", "Zoë"};
    const auto sentences = context_sentences(set, names);
    REQUIRE(sentences.size() == 4);
    for (const auto& e : sentences) {
        CHECK(e.set == "contexts");
        // code point slice equals the word
        std::u32string cps;
        for (std::size_t pos = 0; pos < e.text.size();) {
            const auto d = utf8::decode(e.text, pos);
            cps.push_back(d.cp);
            pos += d.len;
        }
        std::string slice;
        for (std::size_t i = e.start; i < e.end; ++i) slice += utf8::encode(cps[i]);
        CHECK(slice == e.word);
    }
    // sentence i of every name differs only inside the slot
    for (std::size_t i = 0; i < set.k(); ++i) {
        const auto& a = sentences[i];
        const auto& b = sentences[set.k() + i];
        CHECK(a.word != b.word);
        CHECK(a.start == b.start);
    }

    TempDir dir("sent");
    write_sentences(dir / "s.jsonl", sentences);
    CHECK(read_sentences(dir / "s.jsonl") == sentences);
    set.write(dir / "ctx.jsonl");
    CHECK(ContextSet::read(dir / "ctx.jsonl") == set);
}

TEST_CASE("blocklist file") {
    TempDir dir("block");
    write_file(dir / "b.txt", "# public figures\nTaylor Swift\n\n  Taylor Lautner  \n");
    CHECK(load_blocklist(dir / "b.txt") == std::set<std::string>{"Taylor Lautner", "Taylor Swift"});
}
