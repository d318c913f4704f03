#include "mvsc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

namespace mvsc {

namespace {

struct Contingency {
    Matrix counts;  // truth classes x pred classes
    Vector row_sums;
    Vector col_sums;
    double n = 0.0;
};

std::vector<int> compact(const Labels& labels, Index& classes) {
    std::map<int, int> ids;
    for (int label : labels) ids.emplace(label, 0);
    int next = 0;
    for (auto& entry : ids) entry.second = next++;
    classes = next;
    std::vector<int> out;
    out.reserve(labels.size());
    for (int label : labels) out.push_back(ids.at(label));
    return out;
}

Contingency contingency(const Labels& truth, const Labels& pred) {
    if (truth.size() != pred.size()) throw std::invalid_argument("label vectors differ in length");
    if (truth.empty()) throw std::invalid_argument("label vectors are empty");
    Index rows = 0;
    Index cols = 0;
    const auto t = compact(truth, rows);
    const auto p = compact(pred, cols);
    Contingency c;
    c.counts = Matrix::Zero(rows, cols);
    for (std::size_t i = 0; i < t.size(); ++i) c.counts(t[i], p[i]) += 1.0;
    c.row_sums = c.counts.rowwise().sum();
    c.col_sums = c.counts.colwise().sum().transpose();
    c.n = static_cast<double>(truth.size());
    return c;
}

double pairs(double m) { return 0.5 * m * (m - 1.0); }

double entropy(const Vector& sums, double n) {
    double h = 0.0;
    for (Index i = 0; i < sums.size(); ++i) {
        if (sums[i] > 0.0) {
            const double p = sums[i] / n;
            h -= p * std::log(p);
        }
    }
    return h;
}

}  // namespace

NmiNormalization parse_nmi_normalization(const std::string& name) {
    if (name == "geometric" || name == "sqrt") return NmiNormalization::geometric;
    if (name == "arithmetic") return NmiNormalization::arithmetic;
    throw std::invalid_argument("unknown NMI normalization '" + name + "'");
}

std::vector<Index> max_weight_assignment(const Matrix& weight) {
    // Shortest augmenting path Hungarian method on cost = max - weight, 1-based
    // potentials as in the classic O(n^3) formulation.
    const Index n = weight.rows();
    if (weight.cols() != n) throw std::invalid_argument("max_weight_assignment: matrix must be square");
    if (n == 0) return {};
    const double top = weight.maxCoeff();
    const auto cost = [&](Index i, Index j) { return top - weight(i - 1, j - 1); };
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<Index> match(static_cast<std::size_t>(n + 1), 0), way(static_cast<std::size_t>(n + 1), 0);
    for (Index i = 1; i <= n; ++i) {
        match[0] = i;
        Index j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
        std::vector<bool> used(static_cast<std::size_t>(n + 1), false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const Index i0 = match[static_cast<std::size_t>(j0)];
            double delta = inf;
            Index j1 = 0;
            for (Index j = 1; j <= n; ++j) {
                const auto sj = static_cast<std::size_t>(j);
                if (used[sj]) continue;
                const double cur = cost(i0, j) - u[static_cast<std::size_t>(i0)] - v[sj];
                if (cur < minv[sj]) {
                    minv[sj] = cur;
                    way[sj] = j0;
                }
                if (minv[sj] < delta) {
                    delta = minv[sj];
                    j1 = j;
                }
            }
            for (Index j = 0; j <= n; ++j) {
                const auto sj = static_cast<std::size_t>(j);
                if (used[sj]) {
                    u[static_cast<std::size_t>(match[sj])] += delta;
                    v[sj] -= delta;
                } else {
                    minv[sj] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const Index j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<Index> assignment(static_cast<std::size_t>(n), 0);
    for (Index j = 1; j <= n; ++j) assignment[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
    return assignment;
}

double accuracy(const Labels& truth, const Labels& pred) {
    const Contingency c = contingency(truth, pred);
    const Index size = std::max(c.counts.rows(), c.counts.cols());
    Matrix square = Matrix::Zero(size, size);
    square.topLeftCorner(c.counts.rows(), c.counts.cols()) = c.counts;
    const auto match = max_weight_assignment(square);
    double hits = 0.0;
    for (Index i = 0; i < size; ++i) hits += square(i, match[static_cast<std::size_t>(i)]);
    return hits / c.n;
}

double nmi(const Labels& truth, const Labels& pred, NmiNormalization norm) {
    const Contingency c = contingency(truth, pred);
    const double ht = entropy(c.row_sums, c.n);
    const double hp = entropy(c.col_sums, c.n);
    const bool single_t = c.counts.rows() == 1;
    const bool single_p = c.counts.cols() == 1;
    if (single_t && single_p) return 1.0;
    if (single_t || single_p) return 0.0;
    double mi = 0.0;
    for (Index i = 0; i < c.counts.rows(); ++i) {
        for (Index j = 0; j < c.counts.cols(); ++j) {
            const double nij = c.counts(i, j);
            if (nij > 0.0) mi += nij / c.n * std::log(c.n * nij / (c.row_sums[i] * c.col_sums[j]));
        }
    }
    const double denom = norm == NmiNormalization::geometric ? std::sqrt(ht * hp) : 0.5 * (ht + hp);
    return std::clamp(mi / denom, 0.0, 1.0);
}

double ari(const Labels& truth, const Labels& pred) {
    const Contingency c = contingency(truth, pred);
    if (c.n < 2.0) throw std::invalid_argument("ari: need at least two samples");
    const double index = c.counts.unaryExpr(&pairs).sum();
    const double sum_t = c.row_sums.unaryExpr(&pairs).sum();
    const double sum_p = c.col_sums.unaryExpr(&pairs).sum();
    const double total = pairs(c.n);
    const double expected = sum_t * sum_p / total;
    const double max_index = 0.5 * (sum_t + sum_p);
    if (max_index == expected) return 1.0;  // both partitions trivial and identical
    return (index - expected) / (max_index - expected);
}

PairwiseScores pairwise_prf(const Labels& truth, const Labels& pred) {
    const Contingency c = contingency(truth, pred);
    if (c.n < 2.0) throw std::invalid_argument("pairwise_prf: need at least two samples");
    const double tp = c.counts.unaryExpr(&pairs).sum();
    const double fp = c.col_sums.unaryExpr(&pairs).sum() - tp;
    const double fn = c.row_sums.unaryExpr(&pairs).sum() - tp;
    PairwiseScores s;
    s.precision = tp + fp > 0.0 ? tp / (tp + fp) : 1.0;
    s.recall = tp + fn > 0.0 ? tp / (tp + fn) : 1.0;
    s.fscore = s.precision + s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
    return s;
}

MetricReport evaluate(const Labels& truth, const Labels& pred, NmiNormalization norm) {
    const PairwiseScores prf = pairwise_prf(truth, pred);
    return MetricReport{accuracy(truth, pred), nmi(truth, pred, norm), ari(truth, pred), prf.precision, prf.fscore};
}

}  // namespace mvsc
