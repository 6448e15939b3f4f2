#pragma once

#include <array>
#include <vector>

#include "rfsom/matrix.hpp"

namespace rfsom {

/// Symmetric non-negative matrix with zero diagonal.
struct DistanceMatrix {
  Matrix values;

  std::size_t size() const { return values.rows(); }
};

/// 2D coordinates from classical scaling. Columns are centered.
struct Embedding2D {
  Matrix coordinates;  // n x 2
  std::array<double, 2> eigenvalues_used{0.0, 0.0};
  /// |sum of negative eigenvalues| / sum of |eigenvalues|; nonzero when
  /// the input dissimilarities are not Euclidean.
  double negative_mass_fraction = 0.0;
};

struct EigenResult {
  std::vector<double> values;  // descending
  Matrix vectors;              // row k is the eigenvector for values[k]
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Converges when
/// the off-diagonal Frobenius norm falls below 1e-12 relative to the
/// matrix scale; throws after 100 sweeps without convergence.
EigenResult symmetric_eigen(const Matrix& a);

/// Torgerson scaling: B = -1/2 * J * D^2 * J, top-2 eigenpairs, coordinates
/// v_k * sqrt(max(lambda_k, 0)). Axis signs are fixed by making each
/// eigenvector's largest-magnitude entry positive.
Embedding2D classical_mds(const DistanceMatrix& d);

/// Pairwise (non-squared) Euclidean distances of the given rows.
DistanceMatrix euclidean_distance_matrix(const Matrix& rows);

/// Dis = 1 - Prox, viewed as a DistanceMatrix (diagonal forced to exact 0).
DistanceMatrix dissimilarity_from_proximity(const Matrix& proximity);

}  // namespace rfsom
