#pragma once

#include "mvsc/solver.hpp"

#include "oracles.hpp"

#include <Eigen/QR>

namespace fixture {

using namespace mvsc;

inline MultiViewDataset random_dataset(Rng& rng, Index n, std::vector<Index> dims, double scale = 1.0) {
    MultiViewDataset d;
    for (Index dim : dims) d.views.push_back(oracle::random_matrix(rng, dim, n, scale));
    return d;
}

inline Matrix random_affinity(Rng& rng, Index n) {
    Matrix a(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) a(i, j) = i == j ? 0.0 : rng.uniform();
        a.row(i) /= a.row(i).sum();
    }
    return a;
}

inline Matrix random_orthonormal(Rng& rng, Index n, Index c) {
    const Matrix g = oracle::random_matrix(rng, n, c);
    return Eigen::HouseholderQR<Matrix>(g).householderQ() * Matrix::Identity(n, c);
}

// Every block filled with random values satisfying its own invariants.
inline SolverState random_state(Rng& rng, const MultiViewDataset& d, Index c) {
    const Index n = d.n_samples();
    SolverState s;
    for (const Matrix& x : d.views) {
        ViewState v;
        v.Z = oracle::random_matrix(rng, n, n, 0.3);
        v.A = random_affinity(rng, n);
        v.U = oracle::random_matrix(rng, n, n, 0.3);
        v.E = oracle::random_matrix(rng, x.rows(), n, 0.3);
        v.Lambda1 = oracle::random_matrix(rng, x.rows(), n);
        v.Lambda2 = oracle::random_matrix(rng, n, n);
        v.Lambda3 = oracle::random_matrix(rng, n, n);
        v.w = oracle::random_simplex(rng, x.rows());
        s.views.push_back(std::move(v));
    }
    s.Q = random_orthonormal(rng, n, c);
    s.mu = 0.1 + 10.0 * rng.uniform();
    return s;
}

inline SolverConfig random_config(Rng& rng, Index c) {
    SolverConfig cfg;
    cfg.lambda1 = rng.uniform();
    cfg.lambda2 = rng.uniform();
    cfg.lambda3 = rng.uniform();
    cfg.n_clusters = static_cast<int>(c);
    cfg.k_init = 3;
    return cfg;
}

}  // namespace fixture
