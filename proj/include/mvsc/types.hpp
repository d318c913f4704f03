#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace mvsc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Cluster assignment, one entry per sample. Values are an arbitrary integer
/// alphabet unless a function documents otherwise.
using Labels = std::vector<int>;

}  // namespace mvsc
