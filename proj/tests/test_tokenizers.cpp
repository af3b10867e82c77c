#include <doctest.h>

#include "namefreq/tokenizers.hpp"
#include "namefreq/unicode.hpp"
#include "support.hpp"

using namespace namefreq;
using testing_util::TempDir;

namespace {

const std::filesystem::path kVocabDir = std::filesystem::path(NAMEFREQ_TEST_DATA) / "vocab";

const WordCounts kClassic{{"low", 5}, {"lower", 2}, {"newest", 6}, {"widest", 3}};

std::string random_word(std::mt19937_64& rng, const std::vector<std::string>& alphabet, std::size_t max_len) {
    const std::size_t len = 1 + rng() % max_len;
    std::string w;
    for (std::size_t i = 0; i < len; ++i) w += alphabet[rng() % alphabet.size()];
    return w;
}

std::set<std::string> char_set(const WordCounts& counts) {
    std::set<std::string> out;
    for (const auto& [w, c] : counts)
        for (auto& ch : utf8::split_chars(w)) out.insert(ch);
    return out;
}

WordCounts training_corpus() {
    WordCounts wc;
    std::mt19937_64 rng(4);
    const std::vector<std::string> syll{"ta", "yl", "or", "an", "na", "la", "ti", "sha", "jo", "sé", "mi", "ke"};
    for (int i = 0; i < 300; ++i) {
        std::string w;
        for (std::size_t k = 0, n = 1 + rng() % 4; k < n; ++k) w += syll[rng() % syll.size()];
        wc[w] += 1 + rng() % 20;
    }
    for (const auto& s : syll)
        for (const auto& c : utf8::split_chars(s)) wc[c] += 1;
    return wc;
}

}  // namespace

TEST_CASE("bpe trainer on the classic corpus") {
    const auto alphabet = char_set(kClassic).size() + 1;  // plus end marker
    const auto v = train_bpe(kClassic, alphabet + 3);
    REQUIRE(v.merges().size() == 3);
    CHECK(v.merges()[0] == BpeVocab::Merge{"e", "s"});
    CHECK(v.merges()[1] == BpeVocab::Merge{"es", "t"});
    CHECK(v.merges()[2] == BpeVocab::Merge{"est", "</w>"});
    CHECK(train_bpe(kClassic, alphabet).merges().empty());

    const auto full = train_bpe(kClassic, 1000);
    CHECK(encode_bpe("newest", full).subtokens == std::vector<std::string>{"newest</w>"});
    CHECK(encode_bpe("newest", full).singly);
    const auto one = encode_bpe("w", full);
    CHECK(one.singly);
    CHECK(detokenize(one, full) == "w");
    CHECK_THROWS(train_bpe({}, 10));
}

TEST_CASE("bpe single-occurrence word") {
    BpeTrainOptions opt;
    opt.min_pair_count = 1;
    const auto v = train_bpe({{"ab", 1}}, 1000, opt);
    REQUIRE(v.merges().size() == 2);
    CHECK(v.merges()[0] == BpeVocab::Merge{"a", "b"});
    CHECK(v.merges()[1] == BpeVocab::Merge{"ab", "</w>"});
    // default stops once no pair occurs twice
    CHECK(train_bpe({{"ab", 1}}, 1000).merges().empty());
}

TEST_CASE("bpe unknown characters") {
    const auto v = train_bpe(kClassic, 20);
    const auto t = encode_bpe("lowq", v);
    CHECK(t.unk);
    CHECK_FALSE(t.singly);

    BpeVocab fb(v.alphabet(), v.merges(), {"</w>", false, true});
    const auto f = encode_bpe("loé", fb);
    CHECK_FALSE(f.unk);
    CHECK(f.subtokens.size() >= 3);
    CHECK(std::find(f.subtokens.begin(), f.subtokens.end(), "<0xC3>") != f.subtokens.end());
    CHECK(detokenize(f, SubwordVocab(fb)) == "loé");
}

TEST_CASE("bpe merges must be derivable") {
    CHECK_THROWS_AS(BpeVocab({"a", "b"}, {{"a", "b"}, {"ab", "c"}}, {"</w>", false, false}), VocabError);
    CHECK_NOTHROW(BpeVocab({"a", "b", "c"}, {{"a", "b"}, {"ab", "c"}}, {"</w>", false, false}));
}

TEST_CASE("bpe monotonicity in vocab size") {
    const auto wc = training_corpus();
    std::map<std::string, std::size_t> prev;
    for (std::size_t size : {20, 40, 60, 90, 140, 200}) {
        const auto v = train_bpe(wc, size);
        for (const auto& [w, c] : wc) {
            const auto n = encode_bpe(w, v).subtokens.size();
            if (prev.count(w)) CHECK(n <= prev[w]);
            prev[w] = n;
        }
    }
}

TEST_CASE("wordpiece trainer") {
    // (q,u) co-occur exclusively: score 2/(2*2) = 0.5 against 30/(40*40) for (##e,##e)
    const WordCounts wc{{"qu", 2}, {"eeee", 10}};
    const auto base = train_wordpiece(wc, 0 + 4).size();
    CHECK(base == 4);  // q ##u e ##e
    const auto v = train_wordpiece(wc, base + 1);
    CHECK(v.contains("qu"));
    CHECK_FALSE(v.contains("##ee"));
    CHECK(train_wordpiece(wc, base).size() == base);

    // equal scores: (a,##b) before (c,##d)
    const auto tie = train_wordpiece({{"cd", 3}, {"ab", 3}}, 5);
    CHECK(tie.contains("ab"));
    CHECK_FALSE(tie.contains("cd"));
    CHECK_THROWS(train_wordpiece({}, 4));
    CHECK_THROWS(train_wordpiece(wc, 2));
}

TEST_CASE("wordpiece encoding") {
    std::set<std::string> toks{"[UNK]", "un", "##aff", "##able"};
    for (char c : std::string("unafble")) {
        toks.insert(std::string(1, c));
        toks.insert("##" + std::string(1, c));
    }
    const WordPieceVocab v(toks);
    CHECK(encode_wordpiece("unaffable", v).subtokens == std::vector<std::string>{"un", "##aff", "##able"});
    const auto whole = encode_wordpiece("un", v);
    CHECK(whole.subtokens == std::vector<std::string>{"un"});
    CHECK(whole.singly);
    const auto unk = encode_wordpiece("unaffablez", v);
    CHECK(unk.subtokens == std::vector<std::string>{"[UNK]"});
    CHECK(unk.unk);
    CHECK_FALSE(unk.singly);
}

TEST_CASE("unigram trainer") {
    UnigramTrainOptions short_pieces;
    short_pieces.max_piece_chars = 3;
    const auto three = train_unigram({{"abab", 10}}, 3, short_pieces);
    CHECK(three.log_probs().count("ab") == 1);
    CHECK(three.size() == 3);
    const auto four = train_unigram({{"abab", 10}}, 4);
    CHECK(four.log_probs().count("ab") == 1);
    CHECK(four.log_probs().count("aba") == 0);
    CHECK(four.log_probs().count("bab") == 0);

    const auto chars = train_unigram({{"abab", 10}}, 2);
    CHECK(chars.size() == 2);
    CHECK_THROWS(train_unigram({{"abc", 1}}, 2));

    // z appears once; lowest-loss candidates still never include characters
    const WordCounts wc{{"abab", 50}, {"abz", 1}, {"baba", 20}};
    for (std::size_t size : {4, 5, 6, 8}) {
        const auto v = train_unigram(wc, size);
        for (const char* c : {"a", "b", "z"}) CHECK(v.find(c) != nullptr);
        for (const auto& [t, lp] : v.log_probs()) {
            CHECK(std::isfinite(lp));
            CHECK(lp <= 0.0);
        }
    }
}

TEST_CASE("unigram encoding") {
    const UnigramVocab v({{"a", -1.0}, {"b", -1.0}, {"ab", -1.5}});
    CHECK(encode_unigram("ab", v).subtokens == std::vector<std::string>{"ab"});
    CHECK(encode_unigram("a", v).singly);
    const auto unk = encode_unigram("abc", v);
    CHECK(unk.unk);
    CHECK(unk.subtokens == std::vector<std::string>{"<unk>"});
    // equal log-prob: fewer tokens wins
    const UnigramVocab tie({{"a", -1.0}, {"b", -1.0}, {"ab", -2.0}});
    CHECK(encode_unigram("ab", tie).subtokens == std::vector<std::string>{"ab"});
    CHECK_THROWS_AS(UnigramVocab({{"a", 0.5}}), VocabError);
    CHECK_THROWS_AS(UnigramVocab({{"a", -INFINITY}}), VocabError);
}

TEST_CASE("unigram matches exhaustive segmentation") {
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> lp(-9.0, -0.5);
    const std::vector<std::string> alphabet{"a", "b", "é"};
    std::map<std::string, double> pieces;
    for (const auto& c : alphabet) pieces[c] = lp(rng);
    while (pieces.size() < 30) pieces[random_word(rng, alphabet, 4)] = lp(rng);
    const UnigramVocab v(pieces);
    std::vector<std::string> words{""};
    for (int len = 1; len <= 7; ++len) {
        std::vector<std::string> next;
        for (const auto& w : words)
            for (const auto& c : alphabet) next.push_back(w + c);
        for (const auto& w : next) {
            const auto expected = oracle::best_segmentation(utf8::split_chars(w), pieces);
            REQUIRE(expected);
            CHECK(encode_unigram(w, v).subtokens == *expected);
        }
        words = std::move(next);
    }
}

TEST_CASE("lossless encoding for every scheme") {
    const auto wc = training_corpus();
    const auto alpha = char_set(wc);
    const std::vector<std::string> alphabet(alpha.begin(), alpha.end());
    const std::vector<SubwordVocab> vocabs{train_bpe(wc, 80), train_wordpiece(wc, 80), train_unigram(wc, 60)};
    std::mt19937_64 rng(15);
    for (const auto& v : vocabs) {
        for (int i = 0; i < 1000; ++i) {
            const auto w = random_word(rng, alphabet, 12);
            const auto t = encode(w, v);
            REQUIRE_FALSE(t.unk);
            CHECK(detokenize(t, v) == w);
            CHECK(t.singly == (t.subtokens.size() == 1));
        }
    }
    // trainer determinism
    CHECK(std::get<BpeVocab>(SubwordVocab(train_bpe(wc, 80)).get()).merges() ==
          std::get<BpeVocab>(vocabs[0].get()).merges());
    CHECK(train_wordpiece(wc, 80).tokens() == std::get<WordPieceVocab>(vocabs[1].get()).tokens());
    CHECK(train_unigram(wc, 60).log_probs() == std::get<UnigramVocab>(vocabs[2].get()).log_probs());
}

TEST_CASE("pretrained vocabularies") {
    const auto bert = load_pretrained({kVocabDir / "bert_vocab.txt"}, Scheme::WordPiece);
    CHECK(encode("Taylor", bert).singly);
    CHECK(encode("Latisha", bert).subtokens == std::vector<std::string>{"La", "##ti", "##sha"});
    CHECK(encode("unaffable", bert).subtokens == std::vector<std::string>{"un", "##aff", "##able"});
    CHECK_THROWS_AS(load_pretrained({kVocabDir / "dup_vocab.txt"}, Scheme::WordPiece), VocabError);

    const auto gpt2 = load_pretrained({kVocabDir / "gpt2_vocab.json", kVocabDir / "gpt2_merges.txt"}, Scheme::Bpe);
    CHECK(default_space_policy(gpt2) == SpacePolicy::LeadingSpace);
    const auto spaced = tokenize_word("Taylor", gpt2, SpacePolicy::LeadingSpace);
    CHECK(spaced.subtokens == std::vector<std::string>{"ĠTaylor"});
    CHECK(spaced.singly);
    const auto bare = tokenize_word("Taylor", gpt2, SpacePolicy::Bare);
    CHECK(bare.subtokens.size() > 1);
    CHECK(detokenize(bare, gpt2) == "Taylor");
    CHECK(tokenize_word("Anna", gpt2, SpacePolicy::LeadingSpace).singly);
    CHECK(detokenize(tokenize_word("José", gpt2, SpacePolicy::LeadingSpace), gpt2) == " José");
    CHECK_THROWS_AS(load_pretrained({kVocabDir / "gpt2_vocab.json", kVocabDir / "bad_merges.txt"}, Scheme::Bpe),
                    VocabError);

    const auto t5 = load_pretrained({kVocabDir / "t5_unigram.tsv"}, Scheme::Unigram);
    CHECK(default_space_policy(t5) == SpacePolicy::Bare);
    CHECK(tokenize_word("Taylor", t5, SpacePolicy::LeadingSpace).subtokens == std::vector<std::string>{"▁Taylor"});
    const auto lat = tokenize_word("Latisha", t5, SpacePolicy::LeadingSpace);
    CHECK(lat.subtokens == std::vector<std::string>{"▁La", "ti", "sha"});
    CHECK(detokenize(lat, t5) == "▁Latisha");
}

TEST_CASE("byte-level bpe is lossless on arbitrary text") {
    const auto gpt2 = load_pretrained({kVocabDir / "gpt2_vocab.json", kVocabDir / "gpt2_merges.txt"}, Scheme::Bpe);
    std::mt19937_64 rng(23);
    const std::vector<std::string> alphabet{"T", "a", "y", "l", "o", "r", " ", "é", "ß", "名", "\xF0\x9F\x98\x80", "z"};
    for (int i = 0; i < 1000; ++i) {
        const auto w = random_word(rng, alphabet, 10);
        const auto t = encode(w, gpt2);
        CHECK_FALSE(t.unk);
        CHECK(detokenize(t, gpt2) == w);
    }
}

TEST_CASE("written vocabularies load back identically") {
    TempDir dir("vocab");
    const auto wc = training_corpus();
    const std::vector<SubwordVocab> vocabs{train_bpe(wc, 80), train_wordpiece(wc, 80), train_unigram(wc, 60)};
    int k = 0;
    for (const auto& v : vocabs) {
        const auto files = write_vocab(v, dir / std::to_string(k++));
        const auto back = load_pretrained(files, v.scheme());
        CHECK(back.scheme() == v.scheme());
        std::mt19937_64 rng(k);
        const auto alpha = char_set(wc);
        const std::vector<std::string> alphabet(alpha.begin(), alpha.end());
        for (int i = 0; i < 200; ++i) {
            const auto w = random_word(rng, alphabet, 10);
            CHECK(encode(w, back).subtokens == encode(w, v).subtokens);
        }
    }
    const auto gpt2 = load_pretrained({kVocabDir / "gpt2_vocab.json", kVocabDir / "gpt2_merges.txt"}, Scheme::Bpe);
    const auto files = write_vocab(gpt2, dir / "gpt2");
    const auto back = load_pretrained(files, Scheme::Bpe);
    CHECK(tokenize_word("Taylor", back, SpacePolicy::LeadingSpace).singly);
}

TEST_CASE("single tokenization rate by group") {
    std::vector<NameRecord> recs;
    auto add = [&](const std::string& n, DemographicGroup g) {
        NameRecord r;
        r.name = n;
        r.group = g;
        recs.push_back(r);
    };
    add("Anna", DemographicGroup::AF);
    add("Latisha", DemographicGroup::AF);
    add("Mei", DemographicGroup::AF);
    add("Xiu", DemographicGroup::AF);
    add("Taylor", DemographicGroup::WF);
    const Registry reg(recs);
    const auto bert = load_pretrained({kVocabDir / "bert_vocab.txt"}, Scheme::WordPiece);
    const auto rates = single_rate_by_group(reg, bert, SpacePolicy::Bare);
    CHECK(rates.at(DemographicGroup::AF) == 0.25);
    CHECK(rates.at(DemographicGroup::WF) == 1.0);

    std::set<std::string> all{"[UNK]"};
    for (const auto& r : recs) all.insert(r.name);
    const auto full = single_rate_by_group(reg, WordPieceVocab(all), SpacePolicy::Bare);
    for (const auto& [g, rate] : full) CHECK(rate == 1.0);
}
