#pragma once

// Rank statistics shared by every report: average ranks, Pearson and
// Spearman correlation with two-tailed p-values, medians.

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace namefreq {

class StatsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class PValueMethod { TApproximation, ExactPermutation };

std::string to_string(PValueMethod m);

struct SpearmanResult {
    double rho = 0.0;
    // May be 0 when the tail probability is below the double range;
    // log10_p still carries the magnitude.
    double p_two_tailed = 1.0;
    double log10_p = 0.0;
    std::size_t n = 0;
    PValueMethod method = PValueMethod::TApproximation;
};

// Largest sample size for which spearman() enumerates all n! permutations.
inline constexpr std::size_t kExactPermutationMaxN = 10;

// Ranks 1..n; tied values share the mean of the positions they occupy.
std::vector<double> rank_average_ties(std::span<const double> xs);

double pearson(std::span<const double> x, std::span<const double> y);

SpearmanResult spearman(std::span<const double> x, std::span<const double> y);

double median(std::span<const double> xs);

/// log10 of the two-tailed Student-t tail probability P(|T| >= |t|) with
/// `df` degrees of freedom. Evaluated in log space so it stays finite far
/// below the smallest representable double.
double log10_student_t_two_tailed(double t, double df);

/// Natural log of the regularized incomplete beta function I_x(a, b).
double log_incomplete_beta(double x, double a, double b);

/// Formats a p-value for display: plain for representable values,
/// "p < 1e-300" style when the value is below the double range.
std::string format_p_value(double p, double log10_p);

}  // namespace namefreq
