#pragma once

#include "mvsc/data.hpp"
#include "mvsc/types.hpp"

#include <cstdint>
#include <vector>

namespace mvsc {

/// Eigenvectors of the symmetric matrix `l` for its c smallest eigenvalues,
/// ascending. Each column's largest-magnitude entry is made positive (ties go
/// to the lowest row index) so results are reproducible.
Matrix smallest_eigvecs(const Matrix& l, Index c);

/// Same, also returning the eigenvalues.
Matrix smallest_eigvecs(const Matrix& l, Index c, Vector& eigenvalues);

struct KMeansOptions {
    int restarts = 10;
    int max_iter = 300;
    /// Stop when the relative inertia decrease falls below this.
    double tol = 1e-9;
};

struct KMeansResult {
    Labels labels;    // in [0, k)
    Matrix centers;   // k x dim
    double inertia = 0.0;
    /// Inertia after every assignment step of the winning restart.
    std::vector<double> inertia_history;
};

/// Lloyd's algorithm on the rows of `points` with k-means++ seeding. The best
/// restart by inertia wins; ties keep the earliest restart.
KMeansResult kmeans(const Matrix& points, Index k, std::uint64_t seed, const KMeansOptions& options = {});

enum class CutVariant { normalized, ratio };

/// Spectral clustering of an affinity: symmetrize, Laplacian (normalized
/// I - D^-1/2 S D^-1/2 or ratio-cut D - S), c smallest eigenvectors, k-means.
/// The normalized variant row-normalizes the embedding first.
Labels spectral_cluster(const Matrix& affinity, Index c, std::uint64_t seed,
                        CutVariant variant = CutVariant::normalized, const KMeansOptions& options = {});

/// I - D^-1/2 ((S + S^T)/2) D^-1/2; rows with zero degree become identity rows.
Matrix normalized_laplacian(const Matrix& affinity);

/// Single-view baseline: views concatenated feature-wise, Gaussian affinity
/// with sigma = 1, then spectral_cluster.
Labels ncut_baseline(const MultiViewDataset& dataset, Index c, std::uint64_t seed,
                     CutVariant variant = CutVariant::normalized, const KMeansOptions& options = {});

}  // namespace mvsc
