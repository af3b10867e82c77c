#pragma once

// Intra-layer self-similarity, linear CKA against the initial
// representation, and their relation to frequency and tokenization.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "namefreq/corpus.hpp"
#include "namefreq/stats.hpp"

namespace namefreq {

class MetricError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Mean cosine over ordered pairs of distinct rows. Rows that are equal
// score exactly 1.
double self_similarity(const Eigen::MatrixXd& m);

// ||Y'X||_F^2 / (||X'X||_F ||Y'Y||_F) after column-centering both.
double linear_cka(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

// linear_cka(layers[0], layers[layer]).
double similarity_to_initial(const std::map<int, Eigen::MatrixXd>& layers, int layer);

SpearmanResult metric_frequency_correlation(const std::map<std::string, double>& values,
                                            const FrequencyTable& table);

struct TokenizationMeans {
    std::optional<double> single;
    std::optional<double> multi;
    std::size_t single_count = 0;
    std::size_t multi_count = 0;
};

// Partition means of `values` by the single-tokenization flag of each
// name; throws MetricError for a name missing from `singly`.
TokenizationMeans mean_by_tokenization(const std::map<std::string, double>& values,
                                       const std::map<std::string, bool>& singly);

struct ReportingLayers {
    int first = 1;
    int second = 2;
    int semantic = 0;
    int output = 0;

    std::map<std::string, int> named() const;
};

inline constexpr const char* kReportingLayerNames[] = {"first", "second", "semantic", "output"};

}  // namespace namefreq
