#pragma once

#include "mvsc/types.hpp"

namespace mvsc {

struct SimplexProjection {
    Vector point;
    /// Threshold eta with point_j = max(v_j + eta, 0) off the excluded coordinate.
    double multiplier = 0.0;
};

/// Euclidean projection of `v` onto {a >= 0, sum(a) = 1, a_excluded = 0}.
///
/// Sort-based threshold search, O(n log n). Works for any finite input,
/// including all-negative vectors (mass lands on the largest coordinates).
SimplexProjection project_simplex_excluding(const Vector& v, Index excluded);

/// Projection of a nonnegative vector onto the l1 ball of the given radius.
Vector project_l1_ball_nonneg(const Vector& values, double radius);

/// Elementwise sign(m) * max(|m| - tau, 0).
Matrix soft_threshold(const Matrix& m, double tau);

/// argmin_U  t ||U||_2 + 1/2 ||U - M||_F^2.
///
/// With M = P diag(s) Q^T, the singular values become s - proj_{l1, t}(s)
/// (Moreau decomposition of the l-infinity prox); singular vectors are kept.
Matrix prox_spectral_norm(const Matrix& m, double t);

/// Projection of M onto the nuclear-norm ball of radius t; the complement of
/// prox_spectral_norm in the Moreau identity.
Matrix project_nuclear_ball(const Matrix& m, double t);

/// Largest singular value.
double spectral_norm(const Matrix& m);

}  // namespace mvsc
