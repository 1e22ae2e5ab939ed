#pragma once

// Small dense elimination kernels for the restricted KKT systems.

#include <optional>

#include <Eigen/Core>

namespace polyoverlay {

/// Largest absolute entry.
double max_norm(const Eigen::MatrixXd& a);

/// Gaussian elimination with partial (row) pivoting. Returns nullopt when a
/// pivot falls below `relative_pivot` times the max-norm of `a`.
std::optional<Eigen::VectorXd> solve_partial_pivot(Eigen::MatrixXd a, Eigen::VectorXd b, double relative_pivot);

/// Rank by elimination with full pivoting; pivots below `relative_pivot`
/// times the max-norm count as zero.
int pivoted_rank(Eigen::MatrixXd a, double relative_pivot);

} // namespace polyoverlay
