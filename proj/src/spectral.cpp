#include "mvsc/spectral.hpp"

#include "mvsc/graph_ops.hpp"
#include "mvsc/random.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace mvsc {

Matrix smallest_eigvecs(const Matrix& l, Index c, Vector& eigenvalues) {
    if (l.rows() != l.cols()) throw std::invalid_argument("smallest_eigvecs: matrix must be square");
    if (c < 1 || c > l.rows()) {
        throw std::invalid_argument("smallest_eigvecs: c = " + std::to_string(c) + " outside [1, " +
                                    std::to_string(l.rows()) + "]");
    }
    const Matrix sym = 0.5 * (l + l.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    if (solver.info() != Eigen::Success) throw std::runtime_error("smallest_eigvecs: eigensolver did not converge");
    Matrix q = solver.eigenvectors().leftCols(c);
    for (Index j = 0; j < c; ++j) {
        Index best = 0;
        for (Index i = 1; i < q.rows(); ++i) {
            if (std::abs(q(i, j)) > std::abs(q(best, j))) best = i;
        }
        if (q(best, j) < 0.0) q.col(j) = -q.col(j);
    }
    eigenvalues = solver.eigenvalues().head(c);
    return q;
}

Matrix smallest_eigvecs(const Matrix& l, Index c) {
    Vector unused;
    return smallest_eigvecs(l, c, unused);
}

namespace {

struct Assignment {
    Labels labels;
    Vector sq_dist;  // squared distance of each point to its center
    double inertia = 0.0;
};

Assignment assign(const Matrix& points, const Matrix& centers) {
    const Index n = points.rows();
    Assignment out{Labels(static_cast<std::size_t>(n)), Vector(n), 0.0};
    for (Index i = 0; i < n; ++i) {
        Index best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (Index j = 0; j < centers.rows(); ++j) {
            const double d = (points.row(i) - centers.row(j)).squaredNorm();
            if (d < best_d) {
                best_d = d;
                best = j;
            }
        }
        out.labels[static_cast<std::size_t>(i)] = static_cast<int>(best);
        out.sq_dist[i] = best_d;
        out.inertia += best_d;
    }
    return out;
}

Matrix seed_plus_plus(const Matrix& points, Index k, Rng& rng) {
    const Index n = points.rows();
    Matrix centers(k, points.cols());
    std::vector<bool> taken(static_cast<std::size_t>(n), false);
    Index first = static_cast<Index>(rng.below(static_cast<std::uint64_t>(n)));
    centers.row(0) = points.row(first);
    taken[static_cast<std::size_t>(first)] = true;
    Vector nearest = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (Index j = 1; j < k; ++j) {
        const double total = nearest.sum();
        Index pick = -1;
        if (total > 0.0) {
            double target = rng.uniform() * total;
            for (Index i = 0; i < n; ++i) {
                if (nearest[i] <= 0.0) continue;
                pick = i;
                target -= nearest[i];
                if (target < 0.0) break;
            }
        } else {
            // All remaining points coincide with a center; take the next unused one.
            for (Index i = 0; i < n && pick < 0; ++i) {
                if (!taken[static_cast<std::size_t>(i)]) pick = i;
            }
        }
        centers.row(j) = points.row(pick);
        taken[static_cast<std::size_t>(pick)] = true;
        nearest = nearest.cwiseMin((points.rowwise() - centers.row(j)).rowwise().squaredNorm());
    }
    return centers;
}

KMeansResult lloyd(const Matrix& points, Index k, Rng& rng, const KMeansOptions& options) {
    KMeansResult result;
    result.centers = seed_plus_plus(points, k, rng);
    Assignment current = assign(points, result.centers);
    result.inertia_history.push_back(current.inertia);

    for (int iter = 0; iter < options.max_iter; ++iter) {
        Matrix centers = Matrix::Zero(k, points.cols());
        std::vector<Index> counts(static_cast<std::size_t>(k), 0);
        for (Index i = 0; i < points.rows(); ++i) {
            const auto j = current.labels[static_cast<std::size_t>(i)];
            centers.row(j) += points.row(i);
            ++counts[static_cast<std::size_t>(j)];
        }
        Vector reach = current.sq_dist;
        for (Index j = 0; j < k; ++j) {
            if (counts[static_cast<std::size_t>(j)] > 0) {
                centers.row(j) /= static_cast<double>(counts[static_cast<std::size_t>(j)]);
            } else {
                // Empty cluster: move it onto the point farthest from its center.
                Index far = 0;
                reach.maxCoeff(&far);
                centers.row(j) = points.row(far);
                reach[far] = 0.0;
            }
        }
        result.centers = std::move(centers);
        Assignment next = assign(points, result.centers);
        result.inertia_history.push_back(next.inertia);
        const double previous = current.inertia;
        const bool unchanged = next.labels == current.labels;
        current = std::move(next);
        if (unchanged || previous - current.inertia <= options.tol * previous) break;
    }
    result.labels = std::move(current.labels);
    result.inertia = current.inertia;
    return result;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, Index k, std::uint64_t seed, const KMeansOptions& options) {
    const Index n = points.rows();
    if (k < 1 || k > n) {
        throw std::invalid_argument("kmeans: k = " + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
    }
    if (options.restarts < 1) throw std::invalid_argument("kmeans: need at least one restart");
    Rng rng(seed);
    KMeansResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (int r = 0; r < options.restarts; ++r) {
        KMeansResult candidate = lloyd(points, k, rng, options);
        if (candidate.inertia < best.inertia) best = std::move(candidate);
    }
    return best;
}

Matrix normalized_laplacian(const Matrix& affinity) {
    if (affinity.rows() != affinity.cols()) throw std::invalid_argument("normalized_laplacian: matrix must be square");
    const Matrix sym = 0.5 * (affinity + affinity.transpose());
    const Vector degree = sym.rowwise().sum();
    const Vector inv_sqrt = degree.unaryExpr([](double d) { return d > 0.0 ? 1.0 / std::sqrt(d) : 0.0; });
    Matrix lap = -(inv_sqrt.asDiagonal() * sym * inv_sqrt.asDiagonal());
    lap.diagonal().array() += 1.0;
    return lap;
}

Labels spectral_cluster(const Matrix& affinity, Index c, std::uint64_t seed, CutVariant variant,
                        const KMeansOptions& options) {
    const Matrix lap = variant == CutVariant::normalized ? normalized_laplacian(affinity) : laplacian(affinity);
    Matrix embedding = smallest_eigvecs(lap, c);
    if (variant == CutVariant::normalized) {
        for (Index i = 0; i < embedding.rows(); ++i) {
            const double norm = embedding.row(i).norm();
            if (norm > 0.0) embedding.row(i) /= norm;
        }
    }
    return kmeans(embedding, c, seed, options).labels;
}

Labels ncut_baseline(const MultiViewDataset& dataset, Index c, std::uint64_t seed, CutVariant variant,
                     const KMeansOptions& options) {
    dataset.validate();
    return spectral_cluster(gaussian_affinity(concatenate_views(dataset), 1.0), c, seed, variant, options);
}

}  // namespace mvsc
