#include "mvsc/solver.hpp"

#include "mvsc/graph_ops.hpp"
#include "mvsc/metrics.hpp"
#include "mvsc/prox_ops.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cstdint>

using namespace mvsc;

namespace {

SolverConfig small_config(int c = 2) {
    SolverConfig cfg;
    cfg.n_clusters = c;
    cfg.k_init = 3;
    return cfg;
}

void expect_affinity_invariants(const Matrix& a) {
    EXPECT_GE(a.minCoeff(), 0.0);
    EXPECT_EQ(a.diagonal().cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LE((a.rowwise().sum().array() - 1.0).abs().maxCoeff(), 1e-9);
}

// Objective recomputed with scalar loops.
double objective_by_loops(const MultiViewDataset& d, const SolverState& s, const SolverConfig& cfg) {
    double total = 0.0;
    const Index n = d.n_samples();
    for (std::size_t v = 0; v < d.n_views(); ++v) {
        const Matrix& x = d.views[v];
        const ViewState& st = s.views[v];
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < n; ++j) {
                double dist = 0.0;
                for (Index k = 0; k < x.rows(); ++k) {
                    const double diff = st.w(k) * (x(k, i) - x(k, j));
                    dist += diff * diff;
                }
                double qd = 0.0;
                for (Index k = 0; k < s.Q.cols(); ++k) qd += (s.Q(i, k) - s.Q(j, k)) * (s.Q(i, k) - s.Q(j, k));
                // 2 Tr(Q^T L Q) = sum_ij a_ij ||q_i - q_j||^2
                total += st.A(i, j) * dist + cfg.lambda1 * st.A(i, j) * qd;
            }
        }
        total += cfg.lambda2 * std::sqrt(oracle::jacobi_eigenvalues(st.U.transpose() * st.U).maxCoeff());
        total += cfg.lambda3 * st.E.cwiseAbs().sum();
    }
    return total;
}

}  // namespace

TEST(SolverConfig, Validation) {
    SolverConfig cfg = small_config();
    EXPECT_NO_THROW(cfg.validate(10));
    auto bad = [&](auto mutate) {
        SolverConfig c = cfg;
        mutate(c);
        return c;
    };
    EXPECT_THROW(bad([](SolverConfig& c) { c.lambda1 = -1; }).validate(10), std::invalid_argument);
    EXPECT_THROW(bad([](SolverConfig& c) { c.rho = 1.0; }).validate(10), std::invalid_argument);
    EXPECT_THROW(bad([](SolverConfig& c) { c.mu0 = 2e6; }).validate(10), std::invalid_argument);
    EXPECT_THROW(bad([](SolverConfig& c) { c.n_clusters = 1; }).validate(10), std::invalid_argument);
    EXPECT_THROW(bad([](SolverConfig& c) { c.n_clusters = 11; }).validate(10), std::invalid_argument);
    EXPECT_THROW(bad([](SolverConfig& c) { c.k_init = 10; }).validate(10), std::invalid_argument);
    EXPECT_THROW(bad([](SolverConfig& c) { c.k_init = 0; }).validate(10), std::invalid_argument);
}

TEST(SolverConfig, AblationNames) {
    EXPECT_EQ(parse_ablation("eq7"), Ablation::uniform_weights);
    EXPECT_EQ(parse_ablation("no_spectral_norm"), Ablation::no_spectral_norm);
    EXPECT_EQ(to_string(Ablation::full), "full");
    EXPECT_THROW(parse_ablation("eq5"), std::invalid_argument);
    SolverConfig cfg;
    cfg.ablation = Ablation::no_spectral_norm;
    EXPECT_EQ(cfg.effective().lambda2, 0.0);
    cfg.ablation = Ablation::uniform_weights;
    EXPECT_EQ(cfg.effective().lambda2, cfg.lambda2);
}

TEST(Initialize, FollowsInitContract) {
    Rng rng(51);
    const MultiViewDataset d = fixture::random_dataset(rng, 12, {3, 4});
    const Solver solver(d, small_config(3));
    const SolverState s = solver.initialize();
    EXPECT_EQ(s.mu, solver.config().mu0);
    for (std::size_t v = 0; v < 2; ++v) {
        const ViewState& st = s.views[v];
        EXPECT_EQ(st.A, knn_affinity(d.views[v], 3));
        EXPECT_EQ(st.Z, st.A);
        EXPECT_EQ(st.U, st.A);
        EXPECT_TRUE(st.E.isZero(0.0));
        EXPECT_TRUE(st.Lambda1.isZero(0.0));
        EXPECT_TRUE(st.Lambda2.isZero(0.0));
        EXPECT_TRUE(st.Lambda3.isZero(0.0));
        EXPECT_TRUE(st.w.isApprox(Vector::Constant(d.views[v].rows(), 1.0 / d.views[v].rows())));
        expect_affinity_invariants(st.A);
    }
    EXPECT_LE((s.Q.transpose() * s.Q - Matrix::Identity(3, 3)).norm(), 1e-9);
}

TEST(UpdateZ, ZeroDataHalvesAuxiliarySum) {
    Rng rng(52);
    MultiViewDataset d;
    d.views.push_back(Matrix::Zero(3, 8));
    const Solver solver(d, small_config());
    SolverState s = fixture::random_state(rng, d, 2);
    solver.update_z(s, 0);
    const ViewState& v = s.views[0];
    const Matrix expected = 0.5 * ((v.U - v.Lambda2 / s.mu) + (v.A - v.Lambda3 / s.mu));
    EXPECT_LE((v.Z - expected).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(UpdateZ, ZeroRightHandSide) {
    Rng rng(53);
    const MultiViewDataset d = fixture::random_dataset(rng, 8, {4});
    const Solver solver(d, small_config());
    SolverState s = fixture::random_state(rng, d, 2);
    ViewState& v = s.views[0];
    v.E = d.views[0];
    v.Lambda1.setZero();
    v.Lambda2.setZero();
    v.Lambda3.setZero();
    v.U.setZero();
    v.A.setZero();
    solver.update_z(s, 0);
    EXPECT_LE(v.Z.cwiseAbs().maxCoeff(), 1e-15);
}

TEST(UpdateZ, SolvesNormalEquations) {
    Rng rng(54);
    for (int trial = 0; trial < 20; ++trial) {
        const MultiViewDataset d = fixture::random_dataset(rng, 6, {4});
        const Solver solver(d, small_config());
        SolverState s = fixture::random_state(rng, d, 2);
        solver.update_z(s, 0);
        const Matrix& x = d.views[0];
        const ViewState& v = s.views[0];
        const Matrix rhs = x.transpose() * (x - v.E + v.Lambda1 / s.mu) + (v.U - v.Lambda2 / s.mu) +
                           (v.A - v.Lambda3 / s.mu);
        const Matrix lhs = (x.transpose() * x + 2.0 * Matrix::Identity(6, 6)) * v.Z;
        EXPECT_LE((lhs - rhs).norm(), 1e-10);
    }
}

TEST(UpdateA, DominantPenaltyLimit) {
    Rng rng(55);
    const MultiViewDataset d = fixture::random_dataset(rng, 7, {3});
    SolverConfig cfg = small_config();
    cfg.lambda1 = 0.0;
    cfg.mu_max = 1e10;
    const Solver solver(d, cfg);
    SolverState s = fixture::random_state(rng, d, 2);
    s.mu = 1e9;
    ViewState& v = s.views[0];
    v.Lambda3.setZero();
    v.Z = fixture::random_affinity(rng, 7);
    solver.update_a(s, 0);
    EXPECT_LE((v.A - v.Z).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(UpdateA, MatchesRowwiseQpOracle) {
    Rng rng(56);
    for (int trial = 0; trial < 10; ++trial) {
        const Index n = 6;
        const MultiViewDataset d = fixture::random_dataset(rng, n, {3});
        const SolverConfig cfg = fixture::random_config(rng, 2);
        const Solver solver(d, cfg);
        SolverState s = fixture::random_state(rng, d, 2);
        SolverState before = s;
        solver.update_a(s, 0);
        const Matrix& x = d.views[0];
        const ViewState& v = before.views[0];
        for (Index i = 0; i < n; ++i) {
            Vector target(n);
            for (Index j = 0; j < n; ++j) {
                double dist = 0.0;
                for (Index k = 0; k < x.rows(); ++k) dist += std::pow(v.w(k) * (x(k, i) - x(k, j)), 2);
                const double qd = (before.Q.row(i) - before.Q.row(j)).squaredNorm();
                target(j) = v.Z(i, j) + v.Lambda3(i, j) / before.mu - (dist + cfg.lambda1 * qd) / before.mu;
            }
            const Vector ref = oracle::simplex_qp(target, i);
            EXPECT_LE((s.views[0].A.row(i).transpose() - ref).cwiseAbs().maxCoeff(), 1e-7);
        }
        expect_affinity_invariants(s.views[0].A);
    }
}

TEST(UpdateA, SymmetricSamplesGetEqualAffinity) {
    Rng rng(57);
    MultiViewDataset d = fixture::random_dataset(rng, 6, {3});
    d.views[0].col(1) = d.views[0].col(0);
    const Solver solver(d, small_config());
    SolverState s = fixture::random_state(rng, d, 2);
    s.Q.row(1) = s.Q.row(0);
    ViewState& v = s.views[0];
    v.Z.col(1) = v.Z.col(0);
    v.Lambda3.col(1) = v.Lambda3.col(0);
    solver.update_a(s, 0);
    for (Index i = 2; i < 6; ++i) EXPECT_NEAR(v.A(i, 0), v.A(i, 1), 1e-14);
}

TEST(UpdateQ, BlockDiagonalGraphs) {
    Rng rng(58);
    const MultiViewDataset d = fixture::random_dataset(rng, 6, {2, 2});
    const Solver solver(d, small_config());
    SolverState s = fixture::random_state(rng, d, 2);
    for (ViewState& v : s.views) {
        v.A.setZero();
        v.A.block(0, 0, 3, 3).setConstant(0.5);
        v.A.block(3, 3, 3, 3).setConstant(0.5);
        v.A.diagonal().setZero();
    }
    solver.update_q(s);
    const Matrix m = solver.laplacian_sum(s);
    EXPECT_LE(std::abs((s.Q.transpose() * m * s.Q).trace()), 1e-8);
}

TEST(UpdateQ, MinimizesTraceOverOrthonormalQ) {
    Rng rng(59);
    for (int trial = 0; trial < 10; ++trial) {
        const MultiViewDataset d = fixture::random_dataset(rng, 9, {2, 3});
        const Solver solver(d, small_config(3));
        SolverState s = fixture::random_state(rng, d, 3);
        solver.update_q(s);
        const Matrix m = solver.laplacian_sum(s);
        const double got = (s.Q.transpose() * m * s.Q).trace();
        EXPECT_NEAR(got, oracle::jacobi_eigenvalues(m).head(3).sum(), 1e-8);
        EXPECT_LE((s.Q.transpose() * s.Q - Matrix::Identity(3, 3)).norm(), 1e-9);
        for (int k = 0; k < 20; ++k) {
            const Matrix other = fixture::random_orthonormal(rng, 9, 3);
            EXPECT_LE(got, (other.transpose() * m * other).trace() + 1e-10);
        }
    }
}

TEST(UpdateU, ZeroWeightIsIdentity) {
    Rng rng(60);
    const MultiViewDataset d = fixture::random_dataset(rng, 5, {2});
    SolverConfig cfg = small_config();
    cfg.lambda2 = 0.0;
    const Solver solver(d, cfg);
    SolverState s = fixture::random_state(rng, d, 2);
    solver.update_u(s, 0);
    const ViewState& v = s.views[0];
    EXPECT_LE((v.U - (v.Z + v.Lambda2 / s.mu)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(UpdateU, LargeWeightGivesZero) {
    Rng rng(61);
    const MultiViewDataset d = fixture::random_dataset(rng, 5, {2});
    SolverConfig cfg = small_config();
    cfg.lambda2 = 1e6;
    const Solver solver(d, cfg);
    SolverState s = fixture::random_state(rng, d, 2);
    s.mu = 1.0;
    solver.update_u(s, 0);
    EXPECT_LE(s.views[0].U.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(UpdateU, BeatsRandomPerturbations) {
    Rng rng(62);
    const MultiViewDataset d = fixture::random_dataset(rng, 5, {2});
    const SolverConfig cfg = fixture::random_config(rng, 2);
    const Solver solver(d, cfg);
    SolverState s = fixture::random_state(rng, d, 2);
    solver.update_u(s, 0);
    const ViewState& v = s.views[0];
    auto block = [&](const Matrix& u) {
        return cfg.lambda2 * spectral_norm(u) + 0.5 * s.mu * (v.Z - u + v.Lambda2 / s.mu).squaredNorm();
    };
    for (int k = 0; k < 100; ++k) {
        const Matrix delta = oracle::random_matrix(rng, 5, 5).normalized() * 1e-3;
        EXPECT_LE(block(v.U), block(v.U + delta));
    }
}

TEST(UpdateE, ThresholdCases) {
    Rng rng(63);
    const MultiViewDataset d = fixture::random_dataset(rng, 6, {3});
    for (double lambda3 : {0.0, 1e9, 0.7}) {
        SolverConfig cfg = small_config();
        cfg.lambda3 = lambda3;
        const Solver solver(d, cfg);
        SolverState s = fixture::random_state(rng, d, 2);
        s.mu = 2.0;
        solver.update_e(s, 0);
        const ViewState& v = s.views[0];
        const Matrix m = d.views[0] - d.views[0] * v.Z + v.Lambda1 / s.mu;
        const double tau = lambda3 / s.mu;
        for (Index i = 0; i < m.rows(); ++i) {
            for (Index j = 0; j < m.cols(); ++j) {
                EXPECT_NEAR(std::abs(v.E(i, j)), std::max(std::abs(m(i, j)) - tau, 0.0), 1e-12);
                if (v.E(i, j) != 0.0) EXPECT_EQ(std::signbit(v.E(i, j)), std::signbit(m(i, j)));
            }
        }
        if (lambda3 == 0.0) EXPECT_LE((v.E - m).cwiseAbs().maxCoeff(), 1e-15);
        if (lambda3 == 1e9) EXPECT_TRUE(v.E.isZero(0.0));
    }
}

TEST(UpdateW, InverseProportionalWeights) {
    const Vector w = inverse_proportional_weights((Vector(2) << 1.0, 2.0).finished());
    EXPECT_NEAR(w(0), 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(w(1), 1.0 / 3.0, 1e-15);
    const Vector flat = inverse_proportional_weights(Vector::Constant(4, 3.0));
    EXPECT_TRUE(flat.isApprox(Vector::Constant(4, 0.25)));
    const Vector floored = inverse_proportional_weights((Vector(2) << 0.0, 1.0).finished());
    EXPECT_NEAR(floored.sum(), 1.0, 1e-12);
    EXPECT_GT(floored(0), 0.999);
}

TEST(UpdateW, MinimizesQuadraticOverSimplex) {
    Rng rng(64);
    for (int trial = 0; trial < 5; ++trial) {
        const MultiViewDataset d = fixture::random_dataset(rng, 7, {4});
        const Solver solver(d, small_config());
        SolverState s = fixture::random_state(rng, d, 2);
        solver.update_w(s, 0);
        const Matrix& x = d.views[0];
        const Matrix& a = s.views[0].A;
        Vector y = Vector::Zero(4);
        for (Index k = 0; k < 4; ++k) {
            for (Index i = 0; i < 7; ++i) {
                for (Index j = 0; j < 7; ++j) y(k) += 0.25 * (a(i, j) + a(j, i)) * std::pow(x(k, i) - x(k, j), 2);
            }
        }
        // projected gradient on sum_k w_k^2 y_k, projecting through the QP oracle
        Vector w = Vector::Constant(4, 0.25);
        const double step = 0.5 / y.maxCoeff();
        for (int it = 0; it < 20000; ++it) {
            Vector padded(5);
            padded << w - step * 2.0 * y.cwiseProduct(w), 0.0;
            w = oracle::simplex_qp(padded, 4).head(4);
        }
        EXPECT_LE((s.views[0].w - w).cwiseAbs().maxCoeff(), 1e-6);
        EXPECT_NEAR(s.views[0].w.sum(), 1.0, 1e-12);
    }
}

TEST(UpdateW, FrozenInAblationModes) {
    Rng rng(65);
    const MultiViewDataset d = fixture::random_dataset(rng, 7, {4});
    for (Ablation mode : {Ablation::uniform_weights, Ablation::no_spectral_norm}) {
        SolverConfig cfg = small_config();
        cfg.ablation = mode;
        const Solver solver(d, cfg);
        SolverState s = solver.initialize();
        for (int it = 0; it < 3; ++it) solver.update_view(s, 0);
        EXPECT_TRUE(s.views[0].w.isApprox(Vector::Constant(4, 0.25)));
    }
}

TEST(UpdateMultipliers, FeasibleStateLeavesThemFixed) {
    Rng rng(66);
    const MultiViewDataset d = fixture::random_dataset(rng, 6, {3});
    const Solver solver(d, small_config());
    SolverState s = fixture::random_state(rng, d, 2);
    ViewState& v = s.views[0];
    v.A = fixture::random_affinity(rng, 6);
    v.Z = v.A;
    v.U = v.A;
    v.E = d.views[0] - d.views[0] * v.Z;
    const ViewState before = v;
    solver.update_multipliers(s, 0);
    EXPECT_LE((v.Lambda1 - before.Lambda1).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_EQ(v.Lambda2, before.Lambda2);
    EXPECT_EQ(v.Lambda3, before.Lambda3);
}

TEST(UpdateMultipliers, AnalyticStep) {
    Rng rng(67);
    const MultiViewDataset d = fixture::random_dataset(rng, 4, {2});
    const Solver solver(d, small_config());
    SolverState s = fixture::random_state(rng, d, 2);
    s.mu = 2.0;
    ViewState& v = s.views[0];
    v.Lambda2.setZero();
    v.U = v.Z - Matrix::Ones(4, 4);
    solver.update_multipliers(s, 0);
    EXPECT_LE((v.Lambda2 - Matrix::Constant(4, 4, 2.0)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(StepMu, Schedule) {
    Rng rng(68);
    const MultiViewDataset d = fixture::random_dataset(rng, 4, {2});
    const Solver solver(d, small_config());
    SolverState s;
    s.mu = 1e-3;
    solver.step_mu(s);
    EXPECT_DOUBLE_EQ(s.mu, 1.1e-3);
    s.mu = 1e-3;
    for (int k = 1; k <= 50; ++k) {
        solver.step_mu(s);
        EXPECT_NEAR(s.mu, 1e-3 * std::pow(1.1, k), 1e-15 * k * s.mu);
    }
    s.mu = solver.config().mu_max;
    solver.step_mu(s);
    EXPECT_EQ(s.mu, solver.config().mu_max);
}

TEST(Objective, ZeroStateIsZero) {
    Rng rng(69);
    const MultiViewDataset d = fixture::random_dataset(rng, 5, {2});
    const Solver solver(d, small_config());
    SolverState s = fixture::random_state(rng, d, 2);
    ViewState& v = s.views[0];
    v.A.setZero();
    v.E.setZero();
    v.U.setZero();
    EXPECT_EQ(solver.evaluate_objective(s).objective, 0.0);
}

TEST(Objective, EmbeddingTermVanishesOnMatchingBlocks) {
    Rng rng(70);
    const MultiViewDataset d = fixture::random_dataset(rng, 6, {2});
    SolverConfig cfg = small_config();
    cfg.lambda2 = cfg.lambda3 = 0.0;
    cfg.lambda1 = 5.0;
    const Solver solver(d, cfg);
    SolverState s = fixture::random_state(rng, d, 2);
    ViewState& v = s.views[0];
    v.A.setZero();
    v.A.block(0, 0, 3, 3).setConstant(0.5);
    v.A.block(3, 3, 3, 3).setConstant(0.5);
    v.A.diagonal().setZero();
    solver.update_q(s);
    const double local = weighted_sq_distances(d.views[0], v.w).cwiseProduct(v.A).sum();
    EXPECT_NEAR(solver.evaluate_objective(s).objective, local, 1e-10 * local);
}

TEST(Objective, MatchesTermwiseLoops) {
    Rng rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        const MultiViewDataset d = fixture::random_dataset(rng, 7, {3, 2});
        const SolverConfig cfg = fixture::random_config(rng, 2);
        const Solver solver(d, cfg);
        const SolverState s = fixture::random_state(rng, d, 2);
        const ObjectiveReport r = solver.evaluate_objective(s);
        const double ref = objective_by_loops(d, s, cfg);
        EXPECT_NEAR(r.objective, ref, 1e-10 * std::abs(ref));
        double recon = 0.0;
        for (std::size_t v = 0; v < 2; ++v) {
            recon = std::max(recon, (d.views[v] - d.views[v] * s.views[v].Z - s.views[v].E).cwiseAbs().maxCoeff());
        }
        EXPECT_NEAR(r.r_recon, recon, 1e-14);
    }
}

TEST(BlockUpdates, DoNotIncreaseAugmentedLagrangian) {
    Rng rng(72);
    using Update = void (Solver::*)(SolverState&, std::size_t) const;
    const std::vector<std::pair<const char*, Update>> blocks{{"z", &Solver::update_z},
                                                             {"a", &Solver::update_a},
                                                             {"u", &Solver::update_u},
                                                             {"e", &Solver::update_e},
                                                             {"w", &Solver::update_w}};
    for (int trial = 0; trial < 10; ++trial) {
        const MultiViewDataset d = fixture::random_dataset(rng, 10, {4, 5});
        const SolverConfig cfg = fixture::random_config(rng, 2);
        const Solver solver(d, cfg);
        const SolverState s = fixture::random_state(rng, d, 2);
        const double before = solver.augmented_lagrangian(s);
        for (const auto& [name, update] : blocks) {
            for (std::size_t v = 0; v < 2; ++v) {
                SolverState t = s;
                (solver.*update)(t, v);
                EXPECT_LE(solver.augmented_lagrangian(t), before + 1e-8 * std::abs(before)) << name << " view " << v;
            }
        }
    }
}

TEST(Solve, ZeroBudget) {
    const MultiViewDataset d = generate_synthetic({});
    SolverConfig cfg;
    cfg.n_clusters = 3;
    cfg.max_iter = 0;
    const ClusteringResult r = solve(d, cfg);
    EXPECT_TRUE(r.trace.empty());
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.iterations, 0);
    EXPECT_EQ(r.labels.size(), 90u);
}

TEST(Solve, InvariantsHoldEveryIteration) {
    const MultiViewDataset d = generate_synthetic({});
    SolverConfig cfg;
    cfg.n_clusters = 3;
    const Solver solver(d, cfg);
    SolverState s = solver.initialize();
    for (int it = 0; it < 15; ++it) {
        for (std::size_t v = 0; v < d.n_views(); ++v) solver.update_view(s, v);
        solver.update_q(s);
        solver.step_mu(s);
        for (const ViewState& v : s.views) {
            expect_affinity_invariants(v.A);
            EXPECT_GE(v.w.minCoeff(), 0.0);
            EXPECT_NEAR(v.w.sum(), 1.0, 1e-12);
        }
        EXPECT_LE((s.Q.transpose() * s.Q - Matrix::Identity(3, 3)).norm(), 1e-9);
    }
}

TEST(Solve, RecoversSyntheticClusters) {
    const MultiViewDataset d = generate_synthetic({});
    SolverConfig cfg;
    cfg.n_clusters = 3;
    const ClusteringResult r = solve(d, cfg);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.iterations, 200);
    EXPECT_GE(accuracy(*d.labels, r.labels), 0.95);
    ASSERT_FALSE(r.trace.empty());
    const TraceRow& last = r.trace.back();
    EXPECT_LT(std::max({last.r_recon, last.r_u, last.r_a}), cfg.tol);
    for (const TraceRow& row : r.trace) {
        EXPECT_TRUE(std::isfinite(row.objective));
        EXPECT_TRUE(std::isfinite(row.mu));
    }
    for (int l : r.labels) {
        EXPECT_GE(l, 0);
        EXPECT_LT(l, 3);
    }
}

TEST(Solve, UnregularizedResidualsVanish) {
    SynthSpec spec;
    spec.seed = 9;
    const MultiViewDataset d = generate_synthetic(spec);
    SolverConfig cfg;
    cfg.n_clusters = 3;
    cfg.lambda1 = cfg.lambda2 = cfg.lambda3 = 0.0;
    const ClusteringResult r = solve(d, cfg);
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.iterations, 200);
}

TEST(Solve, GraphLabelSource) {
    const MultiViewDataset d = generate_synthetic({});
    SolverConfig cfg;
    cfg.n_clusters = 3;
    cfg.label_source = LabelSource::graph;
    const ClusteringResult r = solve(d, cfg);
    EXPECT_GE(accuracy(*d.labels, r.labels), 0.95);
    EXPECT_EQ(r.fused_similarity.rows(), 90);
}

TEST(Solve, DeterministicAcrossThreadCounts) {
    SynthSpec spec;
    spec.seed = 4;
    const MultiViewDataset d = generate_synthetic(spec);
    SolverConfig cfg;
    cfg.n_clusters = 3;
    cfg.max_iter = 30;
    const ClusteringResult a = solve(d, cfg);
    cfg.threads = 3;
    const ClusteringResult b = solve(d, cfg);
    EXPECT_EQ(a.labels, b.labels);
    ASSERT_EQ(a.trace.size(), b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        const TraceRow& x = a.trace[i];
        const TraceRow& y = b.trace[i];
        EXPECT_EQ(x.iteration, y.iteration);
        for (auto field : {&TraceRow::objective, &TraceRow::r_recon, &TraceRow::r_u, &TraceRow::r_a, &TraceRow::mu}) {
            EXPECT_EQ(std::bit_cast<std::uint64_t>(x.*field), std::bit_cast<std::uint64_t>(y.*field));
        }
    }
}

TEST(Solve, AblationModesFreezeWeights) {
    SynthSpec spec;
    spec.noise_feature_counts = {0, 5, 0};
    const MultiViewDataset d = generate_synthetic(spec);
    SolverConfig cfg;
    cfg.n_clusters = 3;
    cfg.max_iter = 10;
    for (Ablation mode : {Ablation::uniform_weights, Ablation::no_spectral_norm}) {
        cfg.ablation = mode;
        const ClusteringResult r = solve(d, cfg);
        for (std::size_t v = 0; v < 3; ++v) {
            const Index dim = d.views[v].rows();
            EXPECT_TRUE(r.weights[v].isApprox(Vector::Constant(dim, 1.0 / dim)));
        }
    }
    cfg.ablation = Ablation::full;
    const ClusteringResult r = solve(d, cfg);
    EXPECT_GT(r.weights[1].maxCoeff() - r.weights[1].minCoeff(), 1e-3);
}
