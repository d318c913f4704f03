#include "mvsc/solver.hpp"

#include "mvsc/graph_ops.hpp"
#include "mvsc/prox_ops.hpp"
#include "mvsc/spectral.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

namespace mvsc {

namespace {

constexpr double kWeightFloor = 1e-12;

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

Ablation parse_ablation(const std::string& name) {
    if (name == "full" || name == "full_eq8") return Ablation::full;
    if (name == "eq7" || name == "uniform_weights" || name == "uniform_weights_eq7") return Ablation::uniform_weights;
    if (name == "eq6" || name == "no_spectral_norm" || name == "no_spectral_norm_eq6") return Ablation::no_spectral_norm;
    throw std::invalid_argument("unknown ablation mode '" + name + "'");
}

std::string to_string(Ablation ablation) {
    switch (ablation) {
        case Ablation::full: return "full";
        case Ablation::uniform_weights: return "eq7";
        case Ablation::no_spectral_norm: return "eq6";
    }
    return "full";
}

LabelSource parse_label_source(const std::string& name) {
    if (name == "embedding") return LabelSource::embedding;
    if (name == "graph") return LabelSource::graph;
    throw std::invalid_argument("unknown label source '" + name + "'");
}

std::string to_string(LabelSource source) { return source == LabelSource::graph ? "graph" : "embedding"; }

void SolverConfig::validate(Index n) const {
    if (lambda1 < 0.0 || lambda2 < 0.0 || lambda3 < 0.0) throw std::invalid_argument("lambdas must be nonnegative");
    if (!(mu0 > 0.0)) throw std::invalid_argument("mu0 must be positive");
    if (!(rho > 1.0)) throw std::invalid_argument("rho must exceed 1");
    if (mu0 > mu_max) throw std::invalid_argument("mu0 must not exceed mu_max");
    if (max_iter < 0) throw std::invalid_argument("max_iter must be nonnegative");
    if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
    if (n_clusters < 2) throw std::invalid_argument("number of clusters must be at least 2");
    if (n_clusters > n) {
        throw std::invalid_argument("number of clusters " + std::to_string(n_clusters) + " exceeds sample count " +
                                    std::to_string(n));
    }
    if (k_init < 1 || k_init > n - 1) {
        throw std::invalid_argument("k_init = " + std::to_string(k_init) + " outside [1, " + std::to_string(n - 1) + "]");
    }
    if (threads < 1) throw std::invalid_argument("threads must be at least 1");
}

SolverConfig SolverConfig::effective() const {
    SolverConfig out = *this;
    if (ablation == Ablation::no_spectral_norm) out.lambda2 = 0.0;
    return out;
}

double ObjectiveReport::max_residual() const { return std::max({r_recon, r_u, r_a}); }

Vector inverse_proportional_weights(const Vector& y) {
    const Vector inv = y.cwiseMax(kWeightFloor).cwiseInverse();
    return inv / inv.sum();
}

Solver::Solver(const MultiViewDataset& dataset, const SolverConfig& config)
    : dataset_(dataset), config_(config.effective()) {
    dataset_.validate();
    config_.validate(dataset_.n_samples());
    gram_factors_.reserve(dataset_.n_views());
    for (const Matrix& x : dataset_.views) {
        Matrix gram = x.transpose() * x;
        gram.diagonal().array() += 2.0;
        gram_factors_.emplace_back(gram);
        if (gram_factors_.back().info() != Eigen::Success) {
            throw std::runtime_error("Cholesky factorization of X^T X + 2I failed");
        }
    }
}

SolverState Solver::initialize() const {
    SolverState state;
    state.mu = config_.mu0;
    const Index n = dataset_.n_samples();
    for (const Matrix& x : dataset_.views) {
        ViewState view;
        view.A = knn_affinity(x, config_.k_init);
        view.Z = view.A;
        view.U = view.A;
        view.E = Matrix::Zero(x.rows(), n);
        view.Lambda1 = Matrix::Zero(x.rows(), n);
        view.Lambda2 = Matrix::Zero(n, n);
        view.Lambda3 = Matrix::Zero(n, n);
        view.w = Vector::Constant(x.rows(), 1.0 / static_cast<double>(x.rows()));
        state.views.push_back(std::move(view));
    }
    update_q(state);
    return state;
}

void Solver::update_z(SolverState& state, std::size_t v) const {
    const Matrix& x = dataset_.views[v];
    ViewState& s = state.views[v];
    const double mu = state.mu;
    const Matrix v1 = x - s.E + s.Lambda1 / mu;
    Matrix rhs = x.transpose() * v1;
    rhs += s.U - s.Lambda2 / mu;
    rhs += s.A - s.Lambda3 / mu;
    s.Z = gram_factors_[v].solve(rhs);
}

void Solver::update_a(SolverState& state, std::size_t v) const {
    const double mu = state.mu;
    if (!(mu > 0.0)) throw std::logic_error("update_a: penalty must be positive");
    ViewState& s = state.views[v];
    const Index n = dataset_.n_samples();
    Matrix d = weighted_sq_distances(dataset_.views[v], s.w);
    d += config_.lambda1 * row_sq_distances(state.Q);
    d -= mu * (s.Z + s.Lambda3 / mu);
    for (Index i = 0; i < n; ++i) {
        const Vector target = -d.row(i).transpose() / mu;
        s.A.row(i) = project_simplex_excluding(target, i).point.transpose();
    }
}

void Solver::update_u(SolverState& state, std::size_t v) const {
    ViewState& s = state.views[v];
    s.U = prox_spectral_norm(s.Z + s.Lambda2 / state.mu, config_.lambda2 / state.mu);
}

void Solver::update_e(SolverState& state, std::size_t v) const {
    const Matrix& x = dataset_.views[v];
    ViewState& s = state.views[v];
    s.E = soft_threshold(x - x * s.Z + s.Lambda1 / state.mu, config_.lambda3 / state.mu);
}

void Solver::update_w(SolverState& state, std::size_t v) const {
    if (config_.ablation != Ablation::full) return;
    const Matrix& x = dataset_.views[v];
    ViewState& s = state.views[v];
    const Vector y = (x * laplacian(s.A)).cwiseProduct(x).rowwise().sum();
    s.w = inverse_proportional_weights(y);
}

void Solver::update_multipliers(SolverState& state, std::size_t v) const {
    const Matrix& x = dataset_.views[v];
    ViewState& s = state.views[v];
    const double mu = state.mu;
    s.Lambda1 += mu * (x - x * s.Z - s.E);
    s.Lambda2 += mu * (s.Z - s.U);
    s.Lambda3 += mu * (s.Z - s.A);
}

Matrix Solver::laplacian_sum(const SolverState& state) const {
    const Index n = dataset_.n_samples();
    Matrix m = Matrix::Zero(n, n);
    for (const ViewState& s : state.views) m += laplacian(s.A);
    return m;
}

void Solver::update_q(SolverState& state) const {
    state.Q = smallest_eigvecs(laplacian_sum(state), config_.n_clusters);
}

void Solver::step_mu(SolverState& state) const { state.mu = std::min(config_.rho * state.mu, config_.mu_max); }

void Solver::update_view(SolverState& state, std::size_t v) const {
    update_z(state, v);
    update_a(state, v);
    update_u(state, v);
    update_e(state, v);
    update_w(state, v);
    update_multipliers(state, v);
}

ObjectiveReport Solver::evaluate_objective(const SolverState& state) const {
    ObjectiveReport report;
    for (std::size_t v = 0; v < dataset_.n_views(); ++v) {
        const Matrix& x = dataset_.views[v];
        const ViewState& s = state.views[v];
        const double local = weighted_sq_distances(x, s.w).cwiseProduct(s.A).sum();
        const double embed = (state.Q.transpose() * laplacian(s.A) * state.Q).trace();
        report.objective += local + config_.lambda2 * spectral_norm(s.U) + config_.lambda3 * s.E.cwiseAbs().sum() +
                            2.0 * config_.lambda1 * embed;
        report.r_recon = std::max(report.r_recon, max_abs(x - x * s.Z - s.E));
        report.r_u = std::max(report.r_u, max_abs(s.Z - s.U));
        report.r_a = std::max(report.r_a, max_abs(s.Z - s.A));
    }
    return report;
}

double Solver::augmented_lagrangian(const SolverState& state) const {
    double value = 0.0;
    const double mu = state.mu;
    for (std::size_t v = 0; v < dataset_.n_views(); ++v) {
        const Matrix& x = dataset_.views[v];
        const ViewState& s = state.views[v];
        const Matrix recon = x - x * s.Z - s.E;
        const Matrix gap_u = s.Z - s.U;
        const Matrix gap_a = s.Z - s.A;
        value += weighted_sq_distances(x, s.w).cwiseProduct(s.A).sum();
        value += config_.lambda2 * spectral_norm(s.U) + config_.lambda3 * s.E.cwiseAbs().sum();
        value += 2.0 * config_.lambda1 * (state.Q.transpose() * laplacian(s.A) * state.Q).trace();
        value += s.Lambda1.cwiseProduct(recon).sum() + s.Lambda2.cwiseProduct(gap_u).sum() +
                 s.Lambda3.cwiseProduct(gap_a).sum();
        value += 0.5 * mu * (recon.squaredNorm() + gap_u.squaredNorm() + gap_a.squaredNorm());
    }
    return value;
}

Labels Solver::assign_labels(const SolverState& state) const {
    if (config_.label_source == LabelSource::graph) {
        std::vector<Matrix> graphs;
        for (const ViewState& s : state.views) graphs.push_back(s.A);
        return spectral_cluster(fuse_similarity(graphs), config_.n_clusters, config_.seed);
    }
    return kmeans(state.Q, config_.n_clusters, config_.seed).labels;
}

ClusteringResult Solver::solve() const {
    SolverState state = initialize();
    ClusteringResult result;
    const std::size_t views = dataset_.n_views();
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(config_.threads), views);

    for (int iter = 1; iter <= config_.max_iter; ++iter) {
        if (workers <= 1) {
            for (std::size_t v = 0; v < views; ++v) update_view(state, v);
        } else {
            std::vector<std::jthread> pool;
            for (std::size_t t = 0; t < workers; ++t) {
                pool.emplace_back([&, t] {
                    for (std::size_t v = t; v < views; v += workers) update_view(state, v);
                });
            }
        }
        update_q(state);
        const ObjectiveReport report = evaluate_objective(state);
        result.trace.push_back({iter, report.objective, report.r_recon, report.r_u, report.r_a, state.mu});
        result.iterations = iter;
        step_mu(state);
        if (report.max_residual() < config_.tol) {
            result.converged = true;
            break;
        }
    }

    result.labels = assign_labels(state);
    result.Q = state.Q;
    std::vector<Matrix> graphs;
    for (const ViewState& s : state.views) {
        graphs.push_back(s.A);
        result.weights.push_back(s.w);
    }
    result.fused_similarity = fuse_similarity(graphs);
    return result;
}

ClusteringResult solve(const MultiViewDataset& dataset, const SolverConfig& config) {
    return Solver(dataset, config).solve();
}

}  // namespace mvsc
