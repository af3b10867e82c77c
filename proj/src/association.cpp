#include "namefreq/association.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "detail/text.hpp"

namespace namefreq {

namespace {

double mean_cosine(const Vector& w, const std::vector<Vector>& xs) {
    double s = 0.0;
    for (const auto& x : xs) s += cosine(w, x);
    return s / static_cast<double>(xs.size());
}

double population_std(std::span<const double> xs) {
    double m = 0.0;
    for (double x : xs) m += x;
    m /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size()));
}

double association(const Vector& w, const AttributeSets& sets) {
    return mean_cosine(w, sets.a) - mean_cosine(w, sets.b);
}

}  // namespace

void AttributeSets::validate() const {
    if (a.size() < min_size || b.size() < min_size) {
        throw AssociationError("attribute sets " + label_a + "/" + label_b + " need at least " +
                               std::to_string(min_size) + " vectors each, got " + std::to_string(a.size()) + " and " +
                               std::to_string(b.size()));
    }
    if (a.empty() || b.empty()) throw AssociationError("attribute sets must not be empty");
    const auto d = a.front().size();
    for (const auto* set : {&a, &b}) {
        for (const auto& v : *set) {
            if (v.size() != d) throw AssociationError("attribute vectors differ in dimension");
        }
    }
}

AttributeSets embed(const WordSets& words, const std::map<std::string, Vector>& vectors, std::size_t min_size) {
    AttributeSets out{words.label_a, words.label_b, {}, {}, min_size};
    auto fill = [&](const std::vector<std::string>& list, std::vector<Vector>& dst) {
        for (const auto& w : list) {
            const auto it = vectors.find(w);
            if (it == vectors.end()) throw AssociationError("no embedding for attribute word '" + w + "'");
            dst.push_back(it->second);
        }
    };
    fill(words.a, out.a);
    fill(words.b, out.b);
    out.validate();
    return out;
}

double cosine(const Vector& u, const Vector& v) {
    if (u.size() != v.size()) {
        throw AssociationError("cosine: dimensions " + std::to_string(u.size()) + " and " + std::to_string(v.size()));
    }
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0) throw AssociationError("cosine: zero vector");
    return std::clamp(u.dot(v) / (nu * nv), -1.0, 1.0);
}

double sv_weat(const Vector& w, const AttributeSets& sets) {
    sets.validate();
    std::vector<double> all;
    all.reserve(sets.a.size() + sets.b.size());
    double ma = 0.0;
    double mb = 0.0;
    for (const auto& x : sets.a) {
        all.push_back(cosine(w, x));
        ma += all.back();
    }
    for (const auto& x : sets.b) {
        all.push_back(cosine(w, x));
        mb += all.back();
    }
    ma /= static_cast<double>(sets.a.size());
    mb /= static_cast<double>(sets.b.size());
    const double sd = population_std(all);
    if (sd == 0.0) throw AssociationError("sv_weat: all attribute cosines are identical");
    return (ma - mb) / sd;
}

double weat_group_effect_size(std::span<const Vector> x, std::span<const Vector> y, const AttributeSets& sets) {
    sets.validate();
    if (x.empty() || y.empty()) throw AssociationError("weat_group_effect_size: empty target set");
    if (x.size() != y.size()) {
        throw AssociationError("weat_group_effect_size: target sets differ in size (" + std::to_string(x.size()) +
                               " vs " + std::to_string(y.size()) + ")");
    }
    std::vector<double> all;
    double mx = 0.0;
    double my = 0.0;
    for (const auto& w : x) {
        all.push_back(association(w, sets));
        mx += all.back();
    }
    for (const auto& w : y) {
        all.push_back(association(w, sets));
        my += all.back();
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(y.size());
    const double sd = population_std(all);
    if (sd == 0.0) throw AssociationError("weat_group_effect_size: zero standard deviation");
    return std::clamp((mx - my) / sd, -2.0, 2.0);
}

ValenceLexicon load_lexicon(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    ValenceLexicon lex;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        const auto t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto cut = t.find_last_of("\t,");
        if (cut == std::string_view::npos) throw ParseError(path.string(), row, "expected word and rating");
        const auto rating = detail::parse_double(t.substr(cut + 1));
        if (!rating || !std::isfinite(*rating)) throw ParseError(path.string(), row, "bad rating");
        const auto word = std::string(detail::trim(t.substr(0, cut)));
        if (!lex.emplace(word, *rating).second) throw ParseError(path.string(), row, "duplicate word '" + word + "'");
    }
    if (lex.size() < 2) throw ParseError(path.string(), 0, "lexicon needs at least 2 words");
    return lex;
}

std::vector<std::string> load_word_list(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = detail::trim(line);
        if (!t.empty() && t[0] != '#') out.emplace_back(t);
    }
    return out;
}

std::map<int, double> valnorm(const std::map<int, std::map<std::string, Vector>>& layer_vectors,
                              const ValenceLexicon& lexicon, const WordSets& valence_sets,
                              std::size_t min_set_size) {
    if (lexicon.size() < 2) throw AssociationError("valnorm: lexicon needs at least 2 words");
    std::map<int, double> out;
    for (const auto& [layer, vectors] : layer_vectors) {
        const auto sets = embed(valence_sets, vectors, min_set_size);
        std::vector<double> scores;
        std::vector<double> ratings;
        for (const auto& [word, rating] : lexicon) {
            const auto it = vectors.find(word);
            if (it == vectors.end()) {
                throw AssociationError("valnorm: no layer " + std::to_string(layer) + " embedding for '" + word + "'");
            }
            scores.push_back(sv_weat(it->second, sets));
            ratings.push_back(rating);
        }
        out[layer] = pearson(scores, ratings);
    }
    return out;
}

int select_semantic_layer(const std::map<int, double>& scores) {
    if (scores.empty()) throw AssociationError("select_semantic_layer: no scores");
    auto best = scores.begin();
    for (auto it = scores.begin(); it != scores.end(); ++it) {
        if (it->second > best->second) best = it;
    }
    return best->first;
}

bool BiasTestSpec::targets(const NameRecord& r) const {
    return target == TargetKind::NonWhite ? r.race != Race::White : r.gender == Gender::Female;
}

const std::vector<std::string>& canonical_test_ids() {
    static const std::vector<std::string> ids = {"PU25", "PU8", "CF", "MA", "SA"};
    return ids;
}

std::vector<BiasTestSpec> load_canonical_tests(const std::filesystem::path& dir) {
    auto sets = [&](const std::string& a, const std::string& b) {
        return WordSets{a, b, load_word_list(dir / (a + ".txt")), load_word_list(dir / (b + ".txt"))};
    };
    return {
        {"PU25", TargetKind::NonWhite, sets("pleasant25", "unpleasant25")},
        {"PU8", TargetKind::NonWhite, sets("pleasant8", "unpleasant8")},
        {"CF", TargetKind::Female, sets("career", "family")},
        {"MA", TargetKind::Female, sets("math", "arts_math")},
        {"SA", TargetKind::Female, sets("science", "arts_science")},
    };
}

std::map<std::string, double> name_bias_scores(const Registry& registry,
                                               const std::map<std::string, Vector>& name_vectors,
                                               const AttributeSets& sets, const BiasTestSpec& spec) {
    std::map<std::string, double> out;
    for (const auto& r : registry.records()) {
        if (!spec.targets(r)) continue;
        const auto it = name_vectors.find(r.name);
        if (it == name_vectors.end()) {
            throw AssociationError("test " + spec.id + ": no embedding for name '" + r.name + "'");
        }
        out[r.name] = sv_weat(it->second, sets);
    }
    return out;
}

SpearmanResult bias_frequency_correlation(const std::map<std::string, double>& scores,
                                          const FrequencyTable& table) {
    std::vector<double> freq;
    std::vector<double> bias;
    for (const auto& [name, s] : scores) {
        const auto it = table.counts.find(name);
        if (it == table.counts.end()) continue;
        freq.push_back(static_cast<double>(it->second));
        bias.push_back(s);
    }
    if (freq.size() < 3) throw StatsError("bias_frequency_correlation: fewer than 3 names in both inputs");
    return spearman(freq, bias);
}

}  // namespace namefreq
