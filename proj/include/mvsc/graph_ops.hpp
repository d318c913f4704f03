#pragma once

#include "mvsc/types.hpp"

#include <span>

namespace mvsc {

/// L = D - (G + G^T)/2 with D the row sums of the symmetrized graph.
/// Throws std::invalid_argument for non-square input.
Matrix laplacian(const Matrix& graph);

/// Squared Euclidean distances between the columns of `x` after scaling
/// feature k by w_k: entry (i, j) = sum_k w_k^2 (x_ki - x_kj)^2.
/// Exactly symmetric with a zero diagonal.
Matrix weighted_sq_distances(const Matrix& x, const Vector& w);

/// Unweighted squared distances between the columns of `x`.
Matrix sq_distances(const Matrix& x);

/// Squared distances between the rows of `q` (embedding coordinates).
Matrix row_sq_distances(const Matrix& q);

/// Mean of (|Z| + |Z^T|)/2 over the inputs with the diagonal forced to zero.
Matrix fuse_similarity(std::span<const Matrix> zs);

/// Row i puts weight 1/k on the k nearest other samples (Euclidean, ties to
/// the lower index). Rows sum to one; the diagonal is zero.
Matrix knn_affinity(const Matrix& x, Index k);

/// exp(-||x_i - x_j||^2 / (2 sigma^2)) off the diagonal, zero on it.
Matrix gaussian_affinity(const Matrix& x, double sigma);

}  // namespace mvsc
