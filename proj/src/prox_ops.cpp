#include "mvsc/prox_ops.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvsc {

namespace {

// Threshold eta such that sum_j max(values_j + eta, 0) == total (total > 0).
double simplex_threshold(std::vector<double> values, double total) {
    std::sort(values.begin(), values.end(), std::greater<>());
    double prefix = 0.0;
    double eta = total - values.front();
    for (std::size_t r = 0; r < values.size(); ++r) {
        prefix += values[r];
        const double candidate = (total - prefix) / static_cast<double>(r + 1);
        if (values[r] + candidate > 0.0) {
            eta = candidate;
        } else {
            break;
        }
    }
    return eta;
}

Eigen::BDCSVD<Matrix> thin_svd(const Matrix& m) {
    return Eigen::BDCSVD<Matrix>(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
}

}  // namespace

SimplexProjection project_simplex_excluding(const Vector& v, Index excluded) {
    const Index n = v.size();
    if (n < 2) throw std::invalid_argument("project_simplex_excluding: need at least 2 coordinates");
    if (excluded < 0 || excluded >= n) {
        throw std::invalid_argument("project_simplex_excluding: excluded index " + std::to_string(excluded) +
                                    " out of range");
    }
    std::vector<double> candidates;
    candidates.reserve(static_cast<std::size_t>(n - 1));
    for (Index j = 0; j < n; ++j) {
        if (j != excluded) candidates.push_back(v[j]);
    }
    SimplexProjection result;
    result.multiplier = simplex_threshold(std::move(candidates), 1.0);
    result.point = (v.array() + result.multiplier).max(0.0).matrix();
    result.point[excluded] = 0.0;
    return result;
}

Vector project_l1_ball_nonneg(const Vector& values, double radius) {
    if (radius < 0.0) throw std::invalid_argument("project_l1_ball_nonneg: negative radius");
    if (values.size() == 0 || values.sum() <= radius) return values;
    if (radius == 0.0) return Vector::Zero(values.size());
    const double eta = simplex_threshold(std::vector<double>(values.begin(), values.end()), radius);
    return (values.array() + eta).max(0.0).matrix();
}

Matrix soft_threshold(const Matrix& m, double tau) {
    if (tau < 0.0) throw std::invalid_argument("soft_threshold: negative threshold");
    return m.unaryExpr([tau](double x) {
        if (x > tau) return x - tau;
        if (x < -tau) return x + tau;
        return 0.0;
    });
}

Matrix prox_spectral_norm(const Matrix& m, double t) {
    if (t < 0.0) throw std::invalid_argument("prox_spectral_norm: negative weight");
    if (t == 0.0 || m.size() == 0) return m;
    const auto svd = thin_svd(m);
    const Vector& s = svd.singularValues();
    const Vector shrunk = (s - project_l1_ball_nonneg(s, t)).cwiseMax(0.0);
    return svd.matrixU() * shrunk.asDiagonal() * svd.matrixV().transpose();
}

Matrix project_nuclear_ball(const Matrix& m, double t) {
    if (t < 0.0) throw std::invalid_argument("project_nuclear_ball: negative radius");
    if (m.size() == 0) return m;
    const auto svd = thin_svd(m);
    const Vector projected = project_l1_ball_nonneg(svd.singularValues(), t);
    return svd.matrixU() * projected.asDiagonal() * svd.matrixV().transpose();
}

double spectral_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    const Matrix gram = m.rows() < m.cols() ? Matrix(m * m.transpose()) : Matrix(m.transpose() * m);
    const Eigen::SelfAdjointEigenSolver<Matrix> solver(gram, Eigen::EigenvaluesOnly);
    return std::sqrt(std::max(solver.eigenvalues().maxCoeff(), 0.0));
}

}  // namespace mvsc
