#include "namefreq/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <set>

#include <Eigen/QR>

#include "namefreq/association.hpp"
#include "namefreq/embeddings.hpp"
#include "namefreq/names.hpp"
#include "namefreq/tokenizers.hpp"
#include "namefreq/unicode.hpp"

#ifndef NAMEFREQ_DATA_DIR
#define NAMEFREQ_DATA_DIR "data"
#endif

namespace namefreq {

namespace {

// Distributions written out by hand: the standard library ones are not
// specified bit-for-bit, and fixtures must not depend on the toolchain.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
    double normal() {
        if (spare_) {
            spare_ = false;
            return cached_;
        }
        double u = 0.0;
        while (u == 0.0) u = uniform();
        const double v = uniform();
        const double r = std::sqrt(-2.0 * std::log(u));
        cached_ = r * std::sin(2.0 * std::numbers::pi * v);
        spare_ = true;
        return r * std::cos(2.0 * std::numbers::pi * v);
    }
    Eigen::VectorXd gaussian(int d, double scale) {
        Eigen::VectorXd x(d);
        for (int i = 0; i < d; ++i) x[i] = scale * normal();
        return x;
    }
    Eigen::VectorXd unit(int d) {
        Eigen::VectorXd x = gaussian(d, 1.0);
        return x / x.norm();
    }
    Eigen::MatrixXd orthogonal(int d) {
        Eigen::MatrixXd g(d, d);
        for (int i = 0; i < d; ++i) g.col(i) = gaussian(d, 1.0);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
        return qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
    }
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 gen_;
    bool spare_ = false;
    double cached_ = 0.0;
};

const char* kOnsets[] = {"b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z", "sh", "ch"};
const char* kVowels[] = {"a", "e", "i", "o", "u", "ai", "ee"};

std::string make_word(Rng& rng, std::size_t syllables) {
    std::string w;
    for (std::size_t s = 0; s < syllables; ++s) {
        w += kOnsets[rng.below(std::size(kOnsets))];
        w += kVowels[rng.below(std::size(kVowels))];
    }
    return w;
}

const char* kNameTemplates[] = {
    "Yesterday {} went to the market.", "I think {} is right about this.",  "We met {} at the station.",
    "Have you seen {} lately?",         "The letter was signed by {} and sent.", "Everyone said {} would win!",
    "My neighbor {} plants tomatoes.",  "Nobody expected {} to arrive early.",
};

std::string fill(const char* tmpl, const std::string& name) {
    std::string s = tmpl;
    s.replace(s.find("{}"), 2, name);
    return s;
}

std::ofstream open_out(const std::filesystem::path& p) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return out;
}

void write_rows(const std::filesystem::path& path, int layer, const std::vector<Eigen::VectorXd>& rows) {
    MatrixFile f;
    f.layer = static_cast<std::uint32_t>(layer);
    f.values.resize(static_cast<Eigen::Index>(rows.size()), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) f.values.row(static_cast<Eigen::Index>(r)) = rows[r].cast<float>().transpose();
    write_matrix(f, path);
}

}  // namespace

SyntheticFixture write_synthetic_fixture(const std::filesystem::path& dir, const SyntheticOptions& opt) {
    if (opt.semantic_layer < 1 || opt.semantic_layer > opt.layers) {
        throw std::invalid_argument("synthetic: semantic layer outside 1.." + std::to_string(opt.layers));
    }
    if (opt.layers < 2) throw std::invalid_argument("synthetic: need at least 2 layers");
    std::filesystem::create_directories(dir);
    Rng rng(opt.seed);
    const int d = opt.dim;
    const int L = opt.layers;
    const int S = opt.semantic_layer;

    // Attribute words, shipped lists copied into the fixture.
    const std::filesystem::path data_weat = std::filesystem::path(NAMEFREQ_DATA_DIR) / "weat";
    std::filesystem::create_directories(dir / "weat");
    for (const auto& entry : std::filesystem::directory_iterator(data_weat)) {
        if (entry.path().extension() == ".txt") {
            std::filesystem::copy_file(entry.path(), dir / "weat" / entry.path().filename(),
                                       std::filesystem::copy_options::overwrite_existing);
        }
    }
    const auto tests = load_canonical_tests(dir / "weat");

    // Names: 8 groups of names_per_group, unique, not colliding with corpus words.
    std::set<std::string> reserved = {"Taylor", "Swift"};
    for (const auto* t : kNameTemplates) {
        for (const auto& r : utf8::letter_runs(t)) {
            std::string w(t + r.begin, t + r.end);
            w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
            reserved.insert(w);
        }
    }
    struct Person {
        std::string name;
        Race race;
        Gender gender;
        std::uint64_t frequency = 0;
        double u = 0.0;  // normalized log frequency
    };
    const Race races[] = {Race::Asian, Race::Black, Race::Hispanic, Race::White};
    std::vector<Person> people;
    std::set<std::string> used;
    for (auto g : {Gender::Female, Gender::Male}) {
        for (auto r : races) {
            for (std::size_t i = 0; i < opt.names_per_group;) {
                auto w = make_word(rng, 2 + rng.below(2));
                w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
                if (reserved.count(w) || !used.insert(w).second) continue;
                people.push_back({w, r, g});
                ++i;
            }
        }
    }
    const std::size_t n = people.size();
    std::vector<std::size_t> rank(n);
    for (std::size_t i = 0; i < n; ++i) rank[i] = i;
    rng.shuffle(rank);
    const double lo = std::log(static_cast<double>(opt.min_frequency));
    const double hi = std::log(static_cast<double>(opt.max_frequency));
    for (std::size_t i = 0; i < n; ++i) {
        const double t = n > 1 ? static_cast<double>(rank[i]) / static_cast<double>(n - 1) : 1.0;
        people[i].frequency = static_cast<std::uint64_t>(std::llround(std::exp(lo + t * (hi - lo))));
    }
    const double ulo = std::log(static_cast<double>(opt.min_frequency));
    for (auto& p : people) p.u = (std::log(static_cast<double>(p.frequency)) - ulo) / (hi - lo);

    SyntheticFixture fx;
    fx.dir = dir;
    fx.semantic_layer = S;
    for (const auto& p : people) {
        fx.frequency[p.name] = p.frequency;
        fx.names.push_back(p.name);
    }
    std::sort(fx.names.begin(), fx.names.end());

    // Race table (upper-case names, as in the published list) and SSA year file.
    {
        auto out = open_out(dir / "race_table.csv");
        out << "name,obs,white,black,hispanic,api,aian,two_or_more\n";
        for (const auto& p : people) {
            std::string upper = p.name;
            for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            std::array<double, 6> prop;
            prop.fill(0.03);
            prop[static_cast<std::size_t>(p.race)] = 0.85;
            out << upper << ",100";
            for (double v : prop) out << ',' << v;
            out << '\n';
        }
        auto ssa = open_out(dir / "ssa.txt");
        ssa << "name,sex,count\n";
        for (const auto& p : people) {
            const auto major = 500 + rng.below(5000);
            const auto minor = rng.below(40);
            ssa << p.name << ",F," << (p.gender == Gender::Female ? major : minor) << '\n';
            ssa << p.name << ",M," << (p.gender == Gender::Male ? major : minor) << '\n';
        }
    }

    // Corpus: each name occurs exactly `frequency` times; pivot sentences
    // for context harvesting are interleaved.
    WordCounts word_counts;
    {
        std::vector<std::size_t> mentions;
        for (std::size_t i = 0; i < n; ++i) mentions.insert(mentions.end(), people[i].frequency, i);
        rng.shuffle(mentions);
        std::vector<std::string> pivot_lines;
        const char* verbs[] = {"saw", "met", "called", "visited", "thanked", "helped"};
        const char* whens[] = {"last week", "yesterday", "on Monday", "at lunch", "after work", "in the park",
                               "before dinner"};
        for (const auto* v : verbs) {
            for (const auto* w : whens) pivot_lines.push_back(std::string("I ") + v + " Taylor " + w + ".");
        }
        for (int i = 0; i < 4; ++i) pivot_lines.push_back("Taylor Swift released an album.");
        pivot_lines.push_back("I saw Taylor last week.");
        rng.shuffle(pivot_lines);

        auto out = open_out(dir / "corpus.txt");
        std::string line;
        std::size_t in_line = 0;
        const std::size_t stride = std::max<std::size_t>(1, mentions.size() / (pivot_lines.size() + 1));
        std::size_t next_pivot = 0;
        auto count_words = [&](const std::string& text) {
            for (const auto& r : utf8::letter_runs(text)) ++word_counts[text.substr(r.begin, r.end - r.begin)];
        };
        for (std::size_t m = 0; m < mentions.size(); ++m) {
            line += (in_line ? " " : "") + fill(kNameTemplates[rng.below(std::size(kNameTemplates))],
                                                people[mentions[m]].name);
            if (++in_line == 3) {
                out << line << '\n';
                count_words(line);
                line.clear();
                in_line = 0;
            }
            if ((m + 1) % stride == 0 && next_pivot < pivot_lines.size()) {
                out << pivot_lines[next_pivot] << '\n';
                count_words(pivot_lines[next_pivot]);
                ++next_pivot;
            }
        }
        for (; next_pivot < pivot_lines.size(); ++next_pivot) {
            out << pivot_lines[next_pivot] << '\n';
            count_words(pivot_lines[next_pivot]);
        }
        if (!line.empty()) {
            out << line << '\n';
            count_words(line);
        }
        open_out(dir / "blocklist.txt") << "Taylor Swift\n";
    }

    // Lexicon words with ratings on a 1-9 scale.
    std::set<std::string> attribute_set;
    std::vector<std::string> attribute_words;
    for (const auto& t : tests) {
        for (const auto* list : {&t.words.a, &t.words.b}) {
            for (const auto& w : *list) {
                if (attribute_set.insert(w).second) attribute_words.push_back(w);
            }
        }
    }
    std::vector<std::pair<std::string, double>> lexicon;
    {
        std::set<std::string> taken = attribute_set;
        for (const auto& p : people) {
            std::string lower = p.name;
            lower[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(lower[0])));
            taken.insert(lower);
        }
        while (lexicon.size() < opt.lexicon_words) {
            auto w = make_word(rng, 2 + rng.below(2));
            if (!taken.insert(w).second) continue;
            const double rating = 1.0 + std::round(800.0 * rng.uniform()) / 100.0;
            lexicon.emplace_back(w, rating);
        }
        auto out = open_out(dir / "lexicon.tsv");
        out << "# word\trating\n";
        for (const auto& [w, r] : lexicon) out << w << '\t' << r << '\n';
    }

    // WordPiece vocabulary: frequent names whole, the rest letter by letter.
    std::set<std::string> wp_tokens = {"[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]", "Taylor"};
    for (char c = 'a'; c <= 'z'; ++c) {
        wp_tokens.insert(std::string(1, c));
        wp_tokens.insert(std::string(1, static_cast<char>(c - 'a' + 'A')));
        wp_tokens.insert("##" + std::string(1, c));
        wp_tokens.insert("##" + std::string(1, static_cast<char>(c - 'a' + 'A')));
    }
    for (const auto& p : people) {
        if (p.u >= 1.0 - opt.whole_name_share) wp_tokens.insert(p.name);
    }
    for (const auto& w : attribute_words) wp_tokens.insert(w);
    for (const auto& [w, r] : lexicon) wp_tokens.insert(w);
    const SubwordVocab wordpiece = WordPieceVocab(wp_tokens);
    write_vocab(wordpiece, dir / "wordpiece");
    write_vocab(train_bpe(word_counts, 60 + 200), dir / "bpe");

    // Embeddings.
    const std::filesystem::path edir = dir / "embeddings";
    std::filesystem::create_directories(edir);
    Manifest manifest;
    manifest.model = "synthwp";
    for (int l = 0; l <= L; ++l) manifest.layers.push_back(l);
    manifest.dim = static_cast<std::size_t>(d);

    std::vector<Eigen::MatrixXd> rot(static_cast<std::size_t>(L + 1));
    for (int l = 1; l <= L; ++l) rot[l] = rng.orthogonal(d);
    const Eigen::VectorXd valence = rng.unit(d);
    Eigen::VectorXd gender = rng.unit(d);
    gender -= gender.dot(valence) * valence;
    gender /= gender.norm();

    const std::size_t k = opt.contexts;
    std::size_t max_sub = 1;
    std::vector<std::uint32_t> subtokens(n);
    for (std::size_t i = 0; i < n; ++i) {
        subtokens[i] = static_cast<std::uint32_t>(encode(people[i].name, wordpiece).subtokens.size());
        max_sub = std::max<std::size_t>(max_sub, subtokens[i]);
    }
    // Per-context, per-position component of the initial representation.
    std::vector<std::vector<Eigen::VectorXd>> position(k);
    for (auto& row : position) {
        for (std::size_t j = 0; j < max_sub; ++j) row.push_back(rng.gaussian(d, 0.5));
    }

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return people[a].name < people[b].name; });

    for (std::size_t idx = 0; idx < n; ++idx) {
        const auto& p = people[order[idx]];
        const auto s = subtokens[order[idx]];
        ManifestEntry entry{"contexts", p.name, std::vector<std::uint32_t>(k, s), {}};
        std::vector<Eigen::VectorXd> identity, drift;
        for (std::uint32_t j = 0; j < s; ++j) {
            identity.push_back(rng.unit(d));
            drift.push_back(rng.unit(d));
        }
        for (int l = 0; l <= L; ++l) {
            // Frequent names: more context-dependent spread (lower
            // self-similarity) that stays aligned with layer 0 (higher CKA).
            const double spread = 0.3 + 1.5 * p.u + 0.05 * l;
            const double angle = (0.05 + 0.9 * (1.0 - p.u)) * std::numbers::pi / 2.0;
            std::vector<Eigen::VectorXd> rows;
            for (std::size_t c = 0; c < k; ++c) {
                for (std::uint32_t j = 0; j < s; ++j) {
                    if (l == 0) {
                        rows.push_back(identity[j] + position[c][j]);
                    } else {
                        const Eigen::VectorXd noise = rng.gaussian(d, 0.5);
                        const Eigen::VectorXd id = std::cos(angle) * identity[j] + std::sin(angle) * drift[j];
                        rows.push_back(rot[l] * id +
                                       spread * (std::cos(angle) * (rot[l] * position[c][j]) + std::sin(angle) * noise));
                    }
                }
            }
            const auto file = "c" + std::to_string(idx) + "_" + std::to_string(l) + ".cwe";
            write_rows(edir / file, l, rows);
            entry.files[l] = file;
        }
        manifest.entries.push_back(std::move(entry));
    }

    // Bleached sentences for names: at the semantic layer the valence
    // component grows with frequency and the career component shrinks.
    for (std::size_t idx = 0; idx < n; ++idx) {
        const auto& p = people[order[idx]];
        const auto s = subtokens[order[idx]];
        ManifestEntry entry{"bleached", p.name, {s}, {}};
        const Eigen::VectorXd base = rng.unit(d);
        for (int l = 0; l <= L; ++l) {
            Eigen::VectorXd v = base + rng.gaussian(d, 0.1);
            if (l == S) v = 0.6 * base + (-0.8 + 1.6 * p.u) * valence + (0.6 - 1.2 * p.u) * gender;
            const auto file = "b" + std::to_string(idx) + "_" + std::to_string(l) + ".cwe";
            write_rows(edir / file, l, std::vector<Eigen::VectorXd>(s, v));
            entry.files[l] = file;
        }
        manifest.entries.push_back(std::move(entry));
    }

    // Bleached sentences for words: attribute words point along the valence
    // or career direction, lexicon words along valence by rating; noise
    // grows away from the semantic layer.
    std::map<std::string, Eigen::VectorXd> direction;
    for (const auto& t : tests) {
        const Eigen::VectorXd axis = t.id.rfind("PU", 0) == 0 ? valence : gender;
        for (const auto& w : t.words.a) direction[w] = axis;
        for (const auto& w : t.words.b) direction[w] = direction.count(w) ? Eigen::VectorXd(direction[w] - axis) : Eigen::VectorXd(-axis);
    }
    for (const auto& [w, r] : lexicon) direction[w] = ((r - 5.0) / 4.0) * valence;
    std::vector<std::string> words = attribute_words;
    for (const auto& [w, r] : lexicon) words.push_back(w);
    for (std::size_t idx = 0; idx < words.size(); ++idx) {
        const auto& w = words[idx];
        const auto s = static_cast<std::uint32_t>(encode(w, wordpiece).subtokens.size());
        ManifestEntry entry{"bleached", w, {s}, {}};
        const Eigen::VectorXd base = rng.gaussian(d, 0.3);
        for (int l = 0; l <= L; ++l) {
            const double noise = 0.25 + 0.6 * std::abs(l - S);
            const Eigen::VectorXd v = base + direction.at(w) + rng.gaussian(d, noise);
            const auto file = "w" + std::to_string(idx) + "_" + std::to_string(l) + ".cwe";
            write_rows(edir / file, l, std::vector<Eigen::VectorXd>(s, v));
            entry.files[l] = file;
        }
        manifest.entries.push_back(std::move(entry));
    }
    manifest.write(edir / "manifest.json");

    fx.config = dir / "audit.conf";
    auto conf = open_out(fx.config);
    conf << "# synthetic fixture, seed " << opt.seed << "\n"
         << "race_table = race_table.csv\n"
         << "ssa_file = ssa.txt\n"
         << "corpus.synth = corpus.txt\n"
         << "model.synthwp.tokenizer = wordpiece:wordpiece/vocab.txt\n"
         << "model.synthwp.manifest = embeddings/manifest.json\n"
         << "model.synthbpe.tokenizer = bpe:bpe/vocab.json,bpe/merges.txt\n"
         << "weat_dir = weat\n"
         << "lexicon = lexicon.tsv\n"
         << "contexts.corpus = synth\n"
         << "contexts.pivot = Taylor\n"
         << "contexts.k = " << k << "\n"
         << "contexts.blocklist = blocklist.txt\n"
         << "out = out\n"
         << "seed = " << opt.seed << "\n";
    return fx;
}

}  // namespace namefreq
