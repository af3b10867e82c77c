#include "namefreq/contextualization.hpp"

#include <cmath>
#include <vector>

namespace namefreq {

namespace {

// Plain left-to-right dot product; norms and pair products share it so
// equal rows give bit-equal numerator and denominator.
double dot(const double* a, const double* b, Eigen::Index d) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < d; ++k) s += a[k] * b[k];
    return s;
}

Eigen::MatrixXd center_columns(const Eigen::MatrixXd& m) {
    return m.rowwise() - m.colwise().mean();
}

}  // namespace

double self_similarity(const Eigen::MatrixXd& m) {
    const auto n = m.rows();
    const auto d = m.cols();
    if (n < 2) throw MetricError("self_similarity: need at least 2 rows, got " + std::to_string(n));
    const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows = m;
    std::vector<double> nn(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) {
        nn[i] = dot(rows.row(i).data(), rows.row(i).data(), d);
        if (nn[i] == 0.0) throw MetricError("self_similarity: row " + std::to_string(i) + " is zero");
    }
    double sum = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            sum += dot(rows.row(i).data(), rows.row(j).data(), d) / std::sqrt(nn[i] * nn[j]);
        }
    }
    return sum / (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0);
}

double linear_cka(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    if (x.rows() != y.rows()) {
        throw MetricError("linear_cka: row counts differ (" + std::to_string(x.rows()) + " vs " +
                          std::to_string(y.rows()) + ")");
    }
    if (x.rows() < 2) throw MetricError("linear_cka: need at least 2 rows");
    const Eigen::MatrixXd xc = center_columns(x);
    const Eigen::MatrixXd yc = center_columns(y);
    auto degenerate = [](const Eigen::MatrixXd& raw, const Eigen::MatrixXd& c) {
        const double scale = raw.norm();
        return scale == 0.0 || c.norm() <= 1e-12 * scale;
    };
    if (degenerate(x, xc)) throw MetricError("linear_cka: first matrix is constant across rows");
    if (degenerate(y, yc)) throw MetricError("linear_cka: second matrix is constant across rows");

    const auto n = x.rows();
    double cross;
    double nx;
    double ny;
    if (n < std::max(x.cols(), y.cols())) {
        // ||Y'X||_F^2 = <XX', YY'>_F; the n x n Gram form is cheaper here.
        const Eigen::MatrixXd k = xc * xc.transpose();
        const Eigen::MatrixXd l = yc * yc.transpose();
        cross = k.cwiseProduct(l).sum();
        nx = k.norm();
        ny = l.norm();
    } else {
        cross = (yc.transpose() * xc).squaredNorm();
        nx = (xc.transpose() * xc).norm();
        ny = (yc.transpose() * yc).norm();
    }
    return cross / (nx * ny);
}

double similarity_to_initial(const std::map<int, Eigen::MatrixXd>& layers, int layer) {
    const auto base = layers.find(0);
    if (base == layers.end()) throw MetricError("similarity_to_initial: layer 0 missing");
    const auto it = layers.find(layer);
    if (it == layers.end()) throw MetricError("similarity_to_initial: layer " + std::to_string(layer) + " missing");
    return linear_cka(base->second, it->second);
}

SpearmanResult metric_frequency_correlation(const std::map<std::string, double>& values,
                                            const FrequencyTable& table) {
    std::vector<double> freq;
    std::vector<double> metric;
    for (const auto& [name, v] : values) {
        const auto it = table.counts.find(name);
        if (it == table.counts.end()) continue;
        freq.push_back(static_cast<double>(it->second));
        metric.push_back(v);
    }
    if (freq.size() < 3) throw StatsError("metric_frequency_correlation: fewer than 3 names in both inputs");
    return spearman(freq, metric);
}

TokenizationMeans mean_by_tokenization(const std::map<std::string, double>& values,
                                       const std::map<std::string, bool>& singly) {
    TokenizationMeans out;
    double s = 0.0;
    double m = 0.0;
    for (const auto& [name, v] : values) {
        const auto it = singly.find(name);
        if (it == singly.end()) throw MetricError("mean_by_tokenization: no tokenization for '" + name + "'");
        if (it->second) {
            s += v;
            ++out.single_count;
        } else {
            m += v;
            ++out.multi_count;
        }
    }
    if (out.single_count) out.single = s / static_cast<double>(out.single_count);
    if (out.multi_count) out.multi = m / static_cast<double>(out.multi_count);
    return out;
}

std::map<std::string, int> ReportingLayers::named() const {
    return {{"first", first}, {"second", second}, {"semantic", semantic}, {"output", output}};
}

}  // namespace namefreq
