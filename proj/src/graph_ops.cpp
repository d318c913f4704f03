#include "mvsc/graph_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvsc {

namespace {

// Column-pair squared distances, computed by explicit differences so that
// identical columns give exactly zero.
Matrix column_sq_distances(const Matrix& y) {
    const Index n = y.cols();
    Matrix d = Matrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i + 1; j < n; ++j) {
            const double value = (y.col(i) - y.col(j)).squaredNorm();
            d(i, j) = value;
            d(j, i) = value;
        }
    }
    return d;
}

}  // namespace

Matrix laplacian(const Matrix& graph) {
    if (graph.rows() != graph.cols()) {
        throw std::invalid_argument("laplacian: matrix is " + std::to_string(graph.rows()) + "x" +
                                    std::to_string(graph.cols()) + ", expected square");
    }
    const Matrix sym = 0.5 * (graph + graph.transpose());
    Matrix lap = -sym;
    lap.diagonal() += sym.rowwise().sum();
    return lap;
}

Matrix weighted_sq_distances(const Matrix& x, const Vector& w) {
    if (w.size() != x.rows()) {
        throw std::invalid_argument("weighted_sq_distances: weight length " + std::to_string(w.size()) +
                                    " does not match feature count " + std::to_string(x.rows()));
    }
    if ((w.array() < 0.0).any()) throw std::invalid_argument("weighted_sq_distances: negative weight");
    return column_sq_distances(w.asDiagonal() * x);
}

Matrix sq_distances(const Matrix& x) { return column_sq_distances(x); }

Matrix row_sq_distances(const Matrix& q) { return column_sq_distances(q.transpose()); }

Matrix fuse_similarity(std::span<const Matrix> zs) {
    if (zs.empty()) throw std::invalid_argument("fuse_similarity: no matrices given");
    const Index n = zs.front().rows();
    Matrix s = Matrix::Zero(n, n);
    for (const Matrix& z : zs) {
        if (z.rows() != n || z.cols() != n) throw std::invalid_argument("fuse_similarity: shape mismatch");
        const Matrix a = z.cwiseAbs();
        s += 0.5 * (a + a.transpose());
    }
    s /= static_cast<double>(zs.size());
    s.diagonal().setZero();
    return s;
}

Matrix knn_affinity(const Matrix& x, Index k) {
    const Index n = x.cols();
    if (k < 1 || k > n - 1) {
        throw std::invalid_argument("knn_affinity: k = " + std::to_string(k) + " outside [1, " +
                                    std::to_string(n - 1) + "]");
    }
    const Matrix dist = sq_distances(x);
    Matrix a = Matrix::Zero(n, n);
    std::vector<Index> order(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        order.resize(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), Index{0});
        std::erase(order, i);
        std::partial_sort(order.begin(), order.begin() + k, order.end(), [&](Index p, Index q) {
            return dist(i, p) < dist(i, q) || (dist(i, p) == dist(i, q) && p < q);
        });
        for (Index r = 0; r < k; ++r) a(i, order[static_cast<std::size_t>(r)]) = 1.0 / static_cast<double>(k);
    }
    return a;
}

Matrix gaussian_affinity(const Matrix& x, double sigma) {
    if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_affinity: sigma must be positive");
    Matrix s = (-sq_distances(x) / (2.0 * sigma * sigma)).array().exp().matrix();
    s.diagonal().setZero();
    return s;
}

}  // namespace mvsc
