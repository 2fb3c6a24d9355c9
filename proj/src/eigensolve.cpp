#include "gaussgap/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "gaussgap/error.hpp"

namespace gaussgap {

namespace {

void check_count(const DiscreteOperator& op, int k) {
  if (k < 1 || k > op.dimension()) {
    throw ContractViolation("requested " + std::to_string(k) +
                            " eigenpairs from an operator of dimension " +
                            std::to_string(op.dimension()));
  }
}

// Node indices ordered by distance from the centre of the node bounding box.
std::vector<Eigen::Index> center_first_order(const DiscreteOperator& op) {
  const Eigen::Index n = op.dimension();
  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  const int dim = op.coordinate_dim();
  if (dim == 0) return order;
  const auto xy = op.coordinates();
  std::vector<double> center(dim, 0.0);
  for (int d = 0; d < dim; ++d) {
    double lo = xy[d], hi = xy[d];
    for (Eigen::Index i = 0; i < n; ++i) {
      lo = std::min(lo, xy[i * dim + d]);
      hi = std::max(hi, xy[i * dim + d]);
    }
    center[d] = 0.5 * (lo + hi);
  }
  std::vector<double> dist(n, 0.0);
  for (Eigen::Index i = 0; i < n; ++i)
    for (int d = 0; d < dim; ++d)
      dist[i] += (xy[i * dim + d] - center[d]) * (xy[i * dim + d] - center[d]);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return dist[a] < dist[b]; });
  return order;
}

void orient(Eigen::VectorXd& v, const std::vector<Eigen::Index>& order) {
  v.normalize();
  const double cutoff = 1e-6 * v.cwiseAbs().maxCoeff();
  for (Eigen::Index i : order) {
    if (std::abs(v[i]) > cutoff) {
      if (v[i] < 0.0) v = -v;
      return;
    }
  }
}

double default_tolerance(const DiscreteOperator& op) {
  return 1e-10 * std::max(1.0, op.max_abs_entry()) *
         static_cast<double>(op.dimension());
}

void finish(EigenPairs& pairs, const DiscreteOperator& op) {
  const auto order = center_first_order(op);
  pairs.residuals.clear();
  for (std::size_t i = 0; i < pairs.values.size(); ++i) {
    orient(pairs.vectors[i], order);
    pairs.residuals.push_back(eigen_residual(op, pairs.values[i], pairs.vectors[i]));
  }
}

void check_residuals(const EigenPairs& pairs) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (!(pairs.residuals[i] <= pairs.tolerance)) {
      std::ostringstream msg;
      msg << "eigenpair " << i << " residual " << pairs.residuals[i]
          << " exceeds tolerance " << pairs.tolerance;
      throw SpectralExtractionError(msg.str());
    }
  }
}

// Lower bound on the spectrum from Gershgorin discs.
double gershgorin_lower(const DiscreteOperator::Sparse& a) {
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(a.rows());
  Eigen::VectorXd off = Eigen::VectorXd::Zero(a.rows());
  for (int k = 0; k < a.outerSize(); ++k) {
    for (DiscreteOperator::Sparse::InnerIterator it(a, k); it; ++it) {
      if (it.row() == it.col())
        diag[it.row()] += it.value();
      else
        off[it.row()] += std::abs(it.value());
    }
  }
  return (diag - off).minCoeff();
}

}  // namespace

double eigen_residual(const DiscreteOperator& op, double value,
                      const Eigen::VectorXd& vector) {
  return (op.apply(vector) - value * vector).norm() / vector.norm();
}

EigenPairs smallest_symmetric(const DiscreteOperator& op, int k) {
  if (!op.symmetric()) {
    throw ContractViolation("smallest_symmetric requires a symmetric operator");
  }
  check_count(op, k);
  const Eigen::MatrixXd a =
      op.is_sparse() ? Eigen::MatrixXd(op.sparse()) : op.dense();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success) {
    throw SpectralExtractionError("symmetric eigensolver failed");
  }
  EigenPairs pairs;
  pairs.tolerance = default_tolerance(op);
  for (int i = 0; i < k; ++i) {
    pairs.values.push_back(solver.eigenvalues()[i]);
    pairs.vectors.push_back(solver.eigenvectors().col(i));
  }
  finish(pairs, op);
  check_residuals(pairs);
  return pairs;
}

EigenPairs smallest_general(const DiscreteOperator& op, int k) {
  check_count(op, k);
  const Eigen::MatrixXd a =
      op.is_sparse() ? Eigen::MatrixXd(op.sparse()) : op.dense();
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a, true);
  if (solver.info() != Eigen::Success) {
    throw SpectralExtractionError("general eigensolver failed");
  }
  const auto& lambda = solver.eigenvalues();
  std::vector<Eigen::Index> real_idx;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    const double re = lambda[i].real();
    const double im = lambda[i].imag();
    if (std::abs(im) <= 1e-8 * std::abs(re)) real_idx.push_back(i);
  }
  if (static_cast<int>(real_idx.size()) < k) {
    throw SpectralExtractionError(
        "only " + std::to_string(real_idx.size()) +
        " real eigenvalues found, " + std::to_string(k) + " requested");
  }
  // ties broken by index so the ordering is reproducible
  std::stable_sort(real_idx.begin(), real_idx.end(), [&](auto x, auto y) {
    return lambda[x].real() < lambda[y].real();
  });

  EigenPairs pairs;
  pairs.tolerance = default_tolerance(op);
  for (int i = 0; i < k; ++i) {
    const Eigen::Index j = real_idx[i];
    const Eigen::VectorXcd vc = solver.eigenvectors().col(j);
    Eigen::Index big = 0;
    vc.cwiseAbs().maxCoeff(&big);
    const std::complex<double> phase = vc[big] / std::abs(vc[big]);
    Eigen::VectorXd v = (vc * std::conj(phase)).real();
    pairs.values.push_back(lambda[j].real());
    pairs.vectors.push_back(std::move(v));
  }
  finish(pairs, op);
  check_residuals(pairs);
  return pairs;
}

EigenPairs smallest_sparse(const DiscreteOperator& op, int k, double tol,
                           int max_iterations) {
  if (!op.symmetric()) {
    throw ContractViolation("smallest_sparse requires a symmetric operator");
  }
  if (k < 1 || k > 3) {
    throw ContractViolation("smallest_sparse supports k in {1, 2, 3}");
  }
  check_count(op, k);
  if (!(tol > 0.0)) throw ContractViolation("tolerance must be positive");

  using Sparse = DiscreteOperator::Sparse;
  const Sparse a = op.is_sparse() ? op.sparse() : Sparse(op.dense().sparseView());
  const Eigen::Index n = a.rows();
  const Eigen::Index block = std::min<Eigen::Index>(n, k + 4);

  // Shift below the spectrum so A - shift is positive definite and the
  // inverse iteration converges to the algebraically smallest eigenvalues.
  const double lower = gershgorin_lower(a);
  const double shift = lower - 1e-2 * std::max(1.0, std::abs(lower));
  Sparse identity(n, n);
  identity.setIdentity();
  const Sparse shifted = a - shift * identity;
  Eigen::SimplicialLDLT<Sparse> factor(shifted);
  if (factor.info() != Eigen::Success) {
    throw SpectralExtractionError("LDL^T factorization of the shifted operator failed");
  }

  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd x(n, block);
  for (Eigen::Index j = 0; j < block; ++j)
    for (Eigen::Index i = 0; i < n; ++i) x(i, j) = uni(rng);

  EigenPairs pairs;
  pairs.tolerance = tol;
  Eigen::VectorXd ritz_values;
  std::vector<double> last_residuals(k, 0.0);
  for (int iter = 1; iter <= max_iterations; ++iter) {
    const Eigen::MatrixXd y = factor.solve(x);
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
    const Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, block);
    const Eigen::MatrixXd aq = a * q;
    Eigen::MatrixXd h = q.transpose() * aq;
    h = 0.5 * (h + h.transpose()).eval();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(h);
    x = q * ritz.eigenvectors();
    const Eigen::MatrixXd ax = aq * ritz.eigenvectors();
    ritz_values = ritz.eigenvalues();

    bool converged = true;
    for (int i = 0; i < k; ++i) {
      last_residuals[i] =
          (ax.col(i) - ritz_values[i] * x.col(i)).norm() / x.col(i).norm();
      converged = converged && last_residuals[i] <= tol;
    }
    if (converged) {
      pairs.iterations = iter;
      for (int i = 0; i < k; ++i) {
        pairs.values.push_back(ritz_values[i]);
        pairs.vectors.push_back(x.col(i));
      }
      finish(pairs, op);
      return pairs;
    }
  }
  std::ostringstream msg;
  msg << "sparse eigensolver did not converge after " << max_iterations
      << " iterations; residuals:";
  for (double r : last_residuals) msg << ' ' << r;
  msg << " (tolerance " << tol << ")";
  throw ConvergenceError(msg.str());
}

}  // namespace gaussgap
