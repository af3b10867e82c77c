#include "namefreq/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <numeric>

namespace namefreq {

namespace {

constexpr double kLn10 = 2.302585092994045684;

void require_same_length(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw StatsError("length mismatch: " + std::to_string(x.size()) + " vs " +
                         std::to_string(y.size()));
    }
}

bool is_constant(std::span<const double> xs) {
    return std::all_of(xs.begin(), xs.end(), [&](double v) { return v == xs.front(); });
}

// Continued fraction for the incomplete beta function (modified Lentz).
double beta_continued_fraction(double x, double a, double b) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

double log_beta(double a, double b) {
    return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

// log I_x(a, b) given both x and 1 - x, so that callers holding an
// accurate complement do not lose it to cancellation.
double log_ibeta(double x, double one_minus_x, double a, double b) {
    if (x <= 0.0) return -std::numeric_limits<double>::infinity();
    if (one_minus_x <= 0.0) return 0.0;
    const double log_front = a * std::log(x) + b * std::log(one_minus_x) - log_beta(a, b);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return log_front + std::log(beta_continued_fraction(x, a, b) / a);
    }
    const double complement = std::exp(log_front) * beta_continued_fraction(one_minus_x, b, a) / b;
    return std::log1p(-complement);
}

// Sizes of runs of equal values, in ascending value order.
std::vector<std::size_t> tie_group_sizes(std::span<const double> xs) {
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> sizes;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        sizes.push_back(j - i);
        i = j;
    }
    return sizes;
}

// Exact permutation tail for |rho| == 1: the only permutations reaching it
// reproduce the observed ordering up to shuffles inside tie groups (and the
// reversed ordering when the tie pattern is a palindrome).
double log10_perfect_rank_tail(std::span<const double> x, std::span<const double> y) {
    const auto sizes = tie_group_sizes(y);
    double log_count = 0.0;
    for (auto s : sizes) log_count += std::lgamma(static_cast<double>(s) + 1.0);
    const bool palindrome = std::equal(sizes.begin(), sizes.end(), sizes.rbegin());
    const double n = static_cast<double>(x.size());
    const double log_p = log_count + std::log(palindrome ? 2.0 : 1.0) - std::lgamma(n + 1.0);
    return std::min(0.0, log_p / kLn10);
}

}  // namespace

std::string to_string(PValueMethod m) {
    return m == PValueMethod::ExactPermutation ? "exact-permutation" : "t-approximation";
}

std::vector<double> rank_average_ties(std::span<const double> xs) {
    if (xs.empty()) throw StatsError("rank_average_ties: empty input");
    std::vector<std::size_t> order(xs.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(xs.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j < order.size() && xs[order[j]] == xs[order[i]]) ++j;
        // positions i..j-1 hold ranks i+1..j
        const double avg = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
        i = j;
    }
    return ranks;
}

double pearson(std::span<const double> x, std::span<const double> y) {
    require_same_length(x, y);
    if (x.size() < 2) throw StatsError("pearson: need at least 2 samples");
    if (is_constant(x) || is_constant(y)) throw StatsError("pearson: constant series");
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    const double r = sxy / std::sqrt(sxx * syy);
    return std::clamp(r, -1.0, 1.0);
}

SpearmanResult spearman(std::span<const double> x, std::span<const double> y) {
    require_same_length(x, y);
    if (x.size() < 3) throw StatsError("spearman: need at least 3 samples");
    if (is_constant(x) || is_constant(y)) throw StatsError("spearman: constant series");

    const auto rx = rank_average_ties(x);
    const auto ry = rank_average_ties(y);
    SpearmanResult out;
    out.n = x.size();
    out.rho = pearson(rx, ry);

    if (out.n <= kExactPermutationMaxN) {
        // Centered average ranks are multiples of 1/2, so every statistic
        // below is exact in binary floating point.
        const double mid = 0.5 * static_cast<double>(out.n + 1);
        std::vector<double> cx(out.n), cy(out.n);
        for (std::size_t i = 0; i < out.n; ++i) {
            cx[i] = rx[i] - mid;
            cy[i] = ry[i] - mid;
        }
        double observed = 0.0;
        for (std::size_t i = 0; i < out.n; ++i) observed += cx[i] * cy[i];
        observed = std::fabs(observed);

        std::vector<std::size_t> perm(out.n);
        std::iota(perm.begin(), perm.end(), 0);
        std::uint64_t hits = 0, total = 0;
        do {
            double s = 0.0;
            for (std::size_t i = 0; i < out.n; ++i) s += cx[i] * cy[perm[i]];
            if (std::fabs(s) >= observed) ++hits;
            ++total;
        } while (std::next_permutation(perm.begin(), perm.end()));
        out.p_two_tailed = static_cast<double>(hits) / static_cast<double>(total);
        out.log10_p = std::log10(out.p_two_tailed);
        out.method = PValueMethod::ExactPermutation;
        return out;
    }

    if (std::fabs(out.rho) >= 1.0) {
        out.log10_p = log10_perfect_rank_tail(x, y);
        out.p_two_tailed = std::pow(10.0, out.log10_p);
        out.method = PValueMethod::ExactPermutation;
        return out;
    }

    // t = rho sqrt(df / (1 - rho^2)) gives df / (df + t^2) = 1 - rho^2.
    const double df = static_cast<double>(out.n - 2);
    const double r = out.rho;
    const double x_beta = (1.0 - r) * (1.0 + r);
    const double log_p = log_ibeta(x_beta, r * r, 0.5 * df, 0.5);
    out.log10_p = std::min(0.0, log_p / kLn10);
    out.p_two_tailed = std::exp(std::min(0.0, log_p));
    out.method = PValueMethod::TApproximation;
    return out;
}

double median(std::span<const double> xs) {
    if (xs.empty()) throw StatsError("median: empty input");
    std::vector<double> v(xs.begin(), xs.end());
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double log_incomplete_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw StatsError("log_incomplete_beta: a and b must be positive");
    if (x < 0.0 || x > 1.0) throw StatsError("log_incomplete_beta: x outside [0, 1]");
    return log_ibeta(x, 1.0 - x, a, b);
}

double log10_student_t_two_tailed(double t, double df) {
    if (!(df > 0.0)) throw StatsError("student t: degrees of freedom must be positive");
    if (std::isinf(t)) return -std::numeric_limits<double>::infinity();
    const double t2 = t * t;
    const double x = df / (df + t2);
    const double one_minus_x = t2 / (df + t2);
    return std::min(0.0, log_ibeta(x, one_minus_x, 0.5 * df, 0.5) / kLn10);
}

std::string format_p_value(double p, double log10_p) {
    char buf[64];
    if (p <= 0.0 || log10_p < -300.0) {
        return "p < 1e-300";
    }
    if (p < 1e-4) {
        std::snprintf(buf, sizeof buf, "p = 1e%.1f", log10_p);
    } else {
        std::snprintf(buf, sizeof buf, "p = %.4g", p);
    }
    return buf;
}

}  // namespace namefreq
