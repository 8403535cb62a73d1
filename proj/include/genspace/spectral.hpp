#pragma once

#include <Eigen/Dense>

namespace genspace {

/// Leading singular triplets of a dense matrix X (n×d).
struct SingularTriplets {
  Eigen::VectorXd values;    // all min(n, d) singular values, descending
  Eigen::MatrixXd scores;    // n×k, columns u_k·σ_k
  Eigen::MatrixXd loadings;  // d×k, columns v_k
  double total_energy = 0.0; // ‖X‖_F², the sum of all σ²
};

/// Computes the top `k` singular triplets by eigendecomposition of whichever
/// of X·Xᵀ (n ≤ d) or Xᵀ·X is smaller. Each component's sign is chosen so its
/// largest-magnitude loading is positive (lowest index wins near-ties).
///
/// Throws a numerical error when fewer than `k` singular values are
/// distinguishable from zero.
SingularTriplets leading_singular_triplets(const Eigen::MatrixXd& x, int k);

/// Flips the sign of scores/loadings column k so the largest-|loading| entry is
/// positive.
void orient_components(Eigen::MatrixXd& scores, Eigen::MatrixXd& loadings);

}  // namespace genspace
