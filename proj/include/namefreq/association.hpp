#pragma once

// Cosine association scores: single-value WEAT, group effect size,
// ValNorm layer scoring and bias-frequency correlation.

#include <filesystem>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "namefreq/corpus.hpp"
#include "namefreq/names.hpp"
#include "namefreq/stats.hpp"

namespace namefreq {

using Vector = Eigen::VectorXd;

class AssociationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kMinAttributeSetSize = 8;

struct AttributeSets {
    std::string label_a;
    std::string label_b;
    std::vector<Vector> a;
    std::vector<Vector> b;
    std::size_t min_size = kMinAttributeSetSize;

    void validate() const;
};

// Attribute word lists, before embedding.
struct WordSets {
    std::string label_a;
    std::string label_b;
    std::vector<std::string> a;
    std::vector<std::string> b;
};

// Looks each word up in `vectors`; throws AssociationError naming the
// first missing word.
AttributeSets embed(const WordSets& words, const std::map<std::string, Vector>& vectors,
                    std::size_t min_size = kMinAttributeSetSize);

double cosine(const Vector& u, const Vector& v);

// (mean_A cos(w,a) - mean_B cos(w,b)) / population std over A and B.
double sv_weat(const Vector& w, const AttributeSets& sets);

// (mean_X s(x) - mean_Y s(y)) / population std of s over X and Y, with
// s(w) = mean_A cos(w,a) - mean_B cos(w,b). X and Y must be the same size,
// which bounds the result to [-2, 2].
double weat_group_effect_size(std::span<const Vector> x, std::span<const Vector> y, const AttributeSets& sets);

using ValenceLexicon = std::map<std::string, double>;

// "word<TAB>rating" or "word,rating" per line; '#' starts a comment.
ValenceLexicon load_lexicon(const std::filesystem::path& path);

// One word per line; '#' starts a comment.
std::vector<std::string> load_word_list(const std::filesystem::path& path);

// Per layer: Pearson correlation between the SV-WEAT valence score of
// each lexicon word and its human rating. `layer_vectors` maps layer to
// word vectors and must cover both the lexicon and the attribute words.
std::map<int, double> valnorm(const std::map<int, std::map<std::string, Vector>>& layer_vectors,
                              const ValenceLexicon& lexicon, const WordSets& valence_sets,
                              std::size_t min_set_size = kMinAttributeSetSize);

// Argmax; ties go to the lowest layer.
int select_semantic_layer(const std::map<int, double>& scores);

enum class TargetKind { NonWhite, Female };

struct BiasTestSpec {
    std::string id;
    TargetKind target = TargetKind::NonWhite;
    WordSets words;

    bool targets(const NameRecord& r) const;
};

// PU25, PU8, CF, MA, SA built from the word lists in `dir`.
std::vector<BiasTestSpec> load_canonical_tests(const std::filesystem::path& dir);
const std::vector<std::string>& canonical_test_ids();

// SV-WEAT of every targeted name against the test's attribute vectors.
std::map<std::string, double> name_bias_scores(const Registry& registry,
                                               const std::map<std::string, Vector>& name_vectors,
                                               const AttributeSets& sets, const BiasTestSpec& spec);

// Spearman over (frequency, score) for names present in both inputs.
SpearmanResult bias_frequency_correlation(const std::map<std::string, double>& scores,
                                          const FrequencyTable& table);

}  // namespace namefreq
