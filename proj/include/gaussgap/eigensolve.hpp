#pragma once

#include <vector>

#include <Eigen/Dense>

#include "gaussgap/spectral_core.hpp"

namespace gaussgap {

/// The k algebraically smallest eigenpairs of an operator.
///
/// Values are non-decreasing. Vectors have unit Euclidean norm and a
/// deterministic sign: the first entry, scanning nodes outward from the
/// centre of the node cloud, whose magnitude exceeds 1e-6 of the largest
/// entry is positive. residuals[i] = |A v_i - values[i] v_i|_2 and every
/// residual is at most `tolerance`.
struct EigenPairs {
  std::vector<double> values;
  std::vector<Eigen::VectorXd> vectors;
  std::vector<double> residuals;
  double tolerance = 0.0;
  int iterations = 0;

  std::size_t size() const { return values.size(); }
};

/// Dense symmetric backend. Throws ContractViolation for unflagged input or
/// k outside [1, dimension].
EigenPairs smallest_symmetric(const DiscreteOperator& op, int k);

/// Dense general backend for non-symmetric collocation matrices. Complex
/// eigenvalues with |imag| > 1e-8 |real| are discarded; throws
/// SpectralExtractionError when fewer than k real ones remain.
EigenPairs smallest_general(const DiscreteOperator& op, int k);

/// Sparse symmetric backend for k in {1, 2, 3}: block inverse iteration with
/// Rayleigh-Ritz on a shifted LDL^T factorization. Throws ConvergenceError
/// (with iteration count and residuals) once max_iterations is exceeded.
EigenPairs smallest_sparse(const DiscreteOperator& op, int k, double tol,
                           int max_iterations = 5000);

double eigen_residual(const DiscreteOperator& op, double value,
                      const Eigen::VectorXd& vector);

}  // namespace gaussgap
