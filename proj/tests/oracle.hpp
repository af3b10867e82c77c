#pragma once

// Independent reference implementations used as test oracles, and small
// helpers. Nothing here calls into the library under test.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <unistd.h>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// rank = (#less) + (#equal + 1) / 2, quadratic on purpose
inline std::vector<double> ranks(const std::vector<double>& xs) {
    std::vector<double> r(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double less = 0, equal = 0;
        for (double v : xs) {
            if (v < xs[i]) ++less;
            if (v == xs[i]) ++equal;
        }
        r[i] = less + (equal + 1.0) / 2.0;
    }
    return r;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const auto n = static_cast<long double>(x.size());
    long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const long double mx = sx / n, my = sy / n;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson(ranks(x), ranks(y));
}

// Two-sided permutation p-value over all n! reorderings of y.
inline double permutation_p(const std::vector<double>& x, std::vector<double> y) {
    const double observed = std::fabs(spearman(x, y));
    std::vector<std::size_t> idx(y.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::uint64_t hits = 0, total = 0;
    do {
        std::vector<double> py(y.size());
        for (std::size_t i = 0; i < idx.size(); ++i) py[i] = y[idx[i]];
        if (std::fabs(spearman(x, py)) >= observed - 1e-12) ++hits;
        ++total;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return static_cast<double>(hits) / static_cast<double>(total);
}

// HSIC with the centering matrix H = I - 11'/n, linear kernels.
inline double hsic(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    const auto n = x.rows();
    const Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n) - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    const Eigen::MatrixXd k = x * x.transpose();
    const Eigen::MatrixXd l = y * y.transpose();
    return (k * h * l * h).trace() / ((n - 1.0) * (n - 1.0));
}

inline double cka(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    return hsic(x, y) / std::sqrt(hsic(x, x) * hsic(y, y));
}

// Mean cosine over all ordered pairs i != j.
inline double self_similarity(const Eigen::MatrixXd& m) {
    double sum = 0;
    std::size_t pairs = 0;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.rows(); ++j) {
            if (i == j) continue;
            sum += m.row(i).dot(m.row(j)) / (m.row(i).norm() * m.row(j).norm());
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

inline double cosine(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return a.dot(b) / (a.norm() * b.norm());
}

// Letters are [A-Za-z] plus every byte >= 0x80 of a well-formed multibyte
// sequence decoding to a letter; for the ASCII-plus-Latin-1 corpora used
// in tests, testing a small explicit set is enough.
inline bool letter_start(const std::string& s, std::size_t i, std::size_t& len) {
    const auto c = static_cast<unsigned char>(s[i]);
    if ((c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z')) {
        len = 1;
        return true;
    }
    // U+00C0..U+00FF except U+00D7 and U+00F7
    if ((c == 0xC3) && i + 1 < s.size()) {
        const auto d = static_cast<unsigned char>(s[i + 1]);
        if (d >= 0x80 && d <= 0xBF && d != 0x97 && d != 0xB7) {
            len = 2;
            return true;
        }
    }
    return false;
}

// Character-by-character scan: build each letter run, compare to names.
inline std::map<std::string, std::uint64_t> naive_scan(const std::string& text,
                                                       const std::vector<std::string>& names) {
    std::map<std::string, std::uint64_t> counts;
    for (const auto& n : names) counts[n] = 0;
    std::string token;
    auto flush = [&] {
        auto it = counts.find(token);
        if (it != counts.end()) ++it->second;
        token.clear();
    };
    for (std::size_t i = 0; i < text.size();) {
        std::size_t len = 0;
        if (letter_start(text, i, len)) {
            token.append(text, i, len);
            i += len;
        } else {
            flush();
            ++i;
        }
    }
    flush();
    return counts;
}

// Every segmentation of `word` (split into code points) into in-vocab
// pieces; returns the best by log-prob, then fewer pieces, then the
// lexicographically smaller piece sequence.
inline std::optional<std::vector<std::string>> best_segmentation(const std::vector<std::string>& chars,
                                                                 const std::map<std::string, double>& vocab) {
    const std::size_t n = chars.size();
    std::optional<std::vector<std::string>> best;
    double best_score = -INFINITY;
    // bit i set = cut after character i
    for (std::uint64_t mask = 0; mask < (1ULL << (n - 1)); ++mask) {
        std::vector<std::string> pieces;
        std::string cur;
        double score = 0;
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            cur += chars[i];
            if (i == n - 1 || (mask >> i) & 1ULL) {
                auto it = vocab.find(cur);
                if (it == vocab.end()) ok = false;
                else score += it->second;
                pieces.push_back(cur);
                cur.clear();
            }
        }
        if (!ok) continue;
        const bool better = !best || score > best_score + 1e-12 ||
                            (std::fabs(score - best_score) <= 1e-12 &&
                             (pieces.size() < best->size() || (pieces.size() == best->size() && pieces < *best)));
        if (better) {
            best = pieces;
            best_score = score;
        }
    }
    return best;
}

}  // namespace oracle

namespace testing_util {

inline Eigen::MatrixXd random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> nd;
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = nd(rng);
    return m;
}

inline Eigen::MatrixXd random_orthogonal(std::mt19937_64& rng, Eigen::Index d) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(random_matrix(rng, d, d));
    return qr.householderQ() * Eigen::MatrixXd::Identity(d, d);
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static std::uint64_t counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("namefreq_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& p, const std::string& text) {
    std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out << text;
}

inline std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace testing_util
