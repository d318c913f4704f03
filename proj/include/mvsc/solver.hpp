#pragma once

#include "mvsc/data.hpp"
#include "mvsc/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace mvsc {

/// Which parts of the full model are active.
///  full              - featurewise weights are learned
///  uniform_weights   - weights frozen at 1/d_v (spectral-norm model)
///  no_spectral_norm  - weights frozen and lambda2 forced to zero (local-structure model)
enum class Ablation { full, uniform_weights, no_spectral_norm };

/// Where the final labels come from: k-means on the consensus embedding, or
/// spectral clustering of the fused local graphs.
enum class LabelSource { embedding, graph };

Ablation parse_ablation(const std::string& name);
std::string to_string(Ablation ablation);
LabelSource parse_label_source(const std::string& name);
std::string to_string(LabelSource source);

struct SolverConfig {
    double lambda1 = 0.01;  // consensus embedding term
    double lambda2 = 0.1;   // spectral norm of U
    double lambda3 = 0.01;  // l1 sparse error
    double mu0 = 1e-3;
    double rho = 1.1;
    double mu_max = 1e6;
    int max_iter = 200;
    double tol = 1e-6;
    int k_init = 5;
    int n_clusters = 0;
    Ablation ablation = Ablation::full;
    LabelSource label_source = LabelSource::embedding;
    std::uint64_t seed = 0;
    /// Worker threads for the per-view phase; results do not depend on it.
    int threads = 1;

    /// Throws std::invalid_argument on out-of-range values for n samples.
    void validate(Index n) const;

    /// Copy with the ablation's restrictions applied (lambda2 = 0 for
    /// no_spectral_norm).
    SolverConfig effective() const;
};

struct ViewState {
    Matrix Z;        // self-representation, n x n
    Matrix A;        // local graph, row-stochastic with zero diagonal
    Matrix U;        // spectral-norm auxiliary for Z
    Matrix E;        // sparse error, d_v x n
    Matrix Lambda1;  // multiplier for X = XZ + E
    Matrix Lambda2;  // multiplier for Z = U
    Matrix Lambda3;  // multiplier for Z = A
    Vector w;        // feature weights on the simplex
};

struct SolverState {
    std::vector<ViewState> views;
    Matrix Q;  // shared n x c embedding, orthonormal columns
    double mu = 0.0;
};

struct ObjectiveReport {
    double objective = 0.0;
    double r_recon = 0.0;  // max_v ||X - XZ - E||_inf
    double r_u = 0.0;      // max_v ||Z - U||_inf
    double r_a = 0.0;      // max_v ||Z - A||_inf

    double max_residual() const;
};

struct TraceRow {
    int iteration = 0;
    double objective = 0.0;
    double r_recon = 0.0;
    double r_u = 0.0;
    double r_a = 0.0;
    double mu = 0.0;
};

using ConvergenceTrace = std::vector<TraceRow>;

struct ClusteringResult {
    Labels labels;
    Matrix Q;
    Matrix fused_similarity;
    std::vector<Vector> weights;
    ConvergenceTrace trace;
    bool converged = false;
    int iterations = 0;
};

/// Alternating-direction augmented Lagrangian solver for the joint
/// feature-weighting / local-graph / consensus-embedding model.
///
/// The block updates are exposed individually so they can be tested in
/// isolation; solve() runs them in order: per view Z, A, U, E, w, multipliers;
/// then Q; then the penalty step.
class Solver {
public:
    /// Validates inputs and factors X^T X + 2I once per view.
    Solver(const MultiViewDataset& dataset, const SolverConfig& config);

    const SolverConfig& config() const { return config_; }
    const MultiViewDataset& dataset() const { return dataset_; }

    SolverState initialize() const;

    void update_z(SolverState& state, std::size_t view) const;
    void update_a(SolverState& state, std::size_t view) const;
    void update_u(SolverState& state, std::size_t view) const;
    void update_e(SolverState& state, std::size_t view) const;
    void update_w(SolverState& state, std::size_t view) const;
    void update_multipliers(SolverState& state, std::size_t view) const;
    void update_q(SolverState& state) const;
    void step_mu(SolverState& state) const;

    /// Z, A, U, E, w and multiplier updates for one view.
    void update_view(SolverState& state, std::size_t view) const;

    /// Model objective at the split variables plus the constraint residuals.
    ObjectiveReport evaluate_objective(const SolverState& state) const;

    /// Value of the augmented Lagrangian at the current state and penalty.
    double augmented_lagrangian(const SolverState& state) const;

    /// sum_v L_{A_v}, the matrix whose bottom eigenvectors give Q.
    Matrix laplacian_sum(const SolverState& state) const;

    /// Labels from a state, using the configured label source.
    Labels assign_labels(const SolverState& state) const;

    ClusteringResult solve() const;

private:
    const MultiViewDataset& dataset_;
    SolverConfig config_;
    std::vector<Eigen::LLT<Matrix>> gram_factors_;
};

/// Runs the full pipeline on a validated dataset.
ClusteringResult solve(const MultiViewDataset& dataset, const SolverConfig& config);

/// Feature weights minimizing sum_k w_k^2 y_k over the simplex, with y floored
/// at 1e-12: w_k proportional to 1 / y_k.
Vector inverse_proportional_weights(const Vector& y);

}  // namespace mvsc
