#include "gaussgap/spectral_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "gaussgap/error.hpp"

namespace gaussgap {

namespace {

constexpr double kPi = std::numbers::pi;

// Integral of (t - 1/2)^2 cos(m pi t) over (0, 1).
double shifted_square_cosine_moment(int m) {
  if (m == 0) return 1.0 / 12.0;
  if (m % 2 != 0) return 0.0;
  const double mp = m * kPi;
  return 2.0 / (mp * mp);
}

}  // namespace

Interval Interval::with_diameter(double diameter) {
  if (!(diameter > 0.0) || !std::isfinite(diameter)) {
    throw DomainError("interval diameter must be positive and finite, got " +
                      std::to_string(diameter));
  }
  return Interval{0.5 * diameter};
}

ChebGrid cheb_grid(int order, Interval interval) {
  if (order < 8) {
    throw InvalidOrderError("Chebyshev order must be >= 8, got " +
                            std::to_string(order));
  }
  if (!(interval.half_width > 0.0) || !std::isfinite(interval.half_width)) {
    throw DomainError("interval half-width must be positive");
  }
  ChebGrid grid;
  grid.order_ = order;
  grid.interval_ = interval;
  grid.full_nodes_.resize(order + 1);
  // sin form of cos(j pi / N): exactly antisymmetric, exact endpoints and 0.
  for (int j = 0; j <= order; ++j) {
    grid.full_nodes_[j] =
        interval.half_width * std::sin(kPi * (order - 2 * j) / (2.0 * order));
  }
  return grid;
}

DiscreteOperator::DiscreteOperator(Dense matrix, std::vector<double> coordinates,
                                   int coordinate_dim, bool symmetric)
    : dense_(std::move(matrix)),
      coordinates_(std::move(coordinates)),
      coordinate_dim_(coordinate_dim),
      symmetric_(symmetric) {
  validate();
}

DiscreteOperator::DiscreteOperator(Sparse matrix, std::vector<double> coordinates,
                                   int coordinate_dim, bool symmetric)
    : sparse_(std::move(matrix)),
      is_sparse_(true),
      coordinates_(std::move(coordinates)),
      coordinate_dim_(coordinate_dim),
      symmetric_(symmetric) {
  sparse_.makeCompressed();
  validate();
}

void DiscreteOperator::validate() {
  const auto rows = is_sparse_ ? sparse_.rows() : dense_.rows();
  const auto cols = is_sparse_ ? sparse_.cols() : dense_.cols();
  if (rows != cols) throw ContractViolation("operator matrix is not square");
  if (coordinate_dim_ < 0 || coordinate_dim_ > 2) {
    throw ContractViolation("coordinate dimension must be 0, 1 or 2");
  }
  if (coordinate_dim_ == 0 ? !coordinates_.empty()
                           : static_cast<Eigen::Index>(coordinates_.size()) !=
                                 rows * coordinate_dim_) {
    throw ContractViolation("node count does not match operator dimension");
  }
  if (symmetric_) {
    double asym = 0.0;
    if (is_sparse_) {
      const Sparse diff = sparse_ - Sparse(sparse_.transpose());
      for (int k = 0; k < diff.outerSize(); ++k)
        for (Sparse::InnerIterator it(diff, k); it; ++it)
          asym = std::max(asym, std::abs(it.value()));
    } else {
      asym = (dense_ - dense_.transpose()).cwiseAbs().maxCoeff();
    }
    if (asym > 1e-12 * max_abs_entry()) {
      throw ContractViolation("operator flagged symmetric but max|A - A^T| = " +
                              std::to_string(asym));
    }
  }
}

Eigen::Index DiscreteOperator::dimension() const {
  return is_sparse_ ? sparse_.rows() : dense_.rows();
}

const DiscreteOperator::Dense& DiscreteOperator::dense() const {
  if (is_sparse_) throw ContractViolation("operator is stored sparse");
  return dense_;
}

const DiscreteOperator::Sparse& DiscreteOperator::sparse() const {
  if (!is_sparse_) throw ContractViolation("operator is stored dense");
  return sparse_;
}

double DiscreteOperator::max_abs_entry() const {
  if (!is_sparse_) return dense_.size() == 0 ? 0.0 : dense_.cwiseAbs().maxCoeff();
  double m = 0.0;
  for (int k = 0; k < sparse_.outerSize(); ++k)
    for (Sparse::InnerIterator it(sparse_, k); it; ++it)
      m = std::max(m, std::abs(it.value()));
  return m;
}

Eigen::VectorXd DiscreteOperator::apply(const Eigen::VectorXd& x) const {
  if (is_sparse_) return sparse_ * x;
  return dense_ * x;
}

Eigen::MatrixXd cheb_differentiation_matrix(const ChebGrid& grid) {
  const int n = grid.order();
  const auto nodes = grid.full_nodes();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n + 1, n + 1);
  auto weight = [n](int i) { return (i == 0 || i == n) ? 2.0 : 1.0; };
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      const double sign = ((i + j) % 2 == 0) ? 1.0 : -1.0;
      // nodes are scaled, so this already carries the 1/half_width factor
      d(i, j) = sign * weight(i) / weight(j) / (nodes[i] - nodes[j]);
    }
  }
  // negative-sum trick for the diagonal: rows annihilate constants exactly
  for (int i = 0; i <= n; ++i) d(i, i) = -d.row(i).sum();
  return d;
}

DiscreteOperator cheb_dirichlet_second_derivative(const ChebGrid& grid) {
  const int n = grid.order();
  const Eigen::MatrixXd d = cheb_differentiation_matrix(grid);
  const Eigen::MatrixXd d2 = d * d;
  Eigen::MatrixXd inner = d2.block(1, 1, n - 1, n - 1);
  const auto interior = grid.interior_nodes();
  return DiscreteOperator(std::move(inner),
                          std::vector<double>(interior.begin(), interior.end()),
                          1, false);
}

std::vector<double> clenshaw_curtis_weights(const ChebGrid& grid) {
  const int n = grid.order();
  std::vector<double> w(n + 1, 0.0);
  const double n2 = static_cast<double>(n) * n;
  for (int i = 1; i < n; ++i) {
    const double theta = kPi * i / n;
    double v = 1.0;
    if (n % 2 == 0) {
      for (int k = 1; k < n / 2; ++k)
        v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
      v -= std::cos(n * theta) / (n2 - 1.0);
    } else {
      for (int k = 1; k <= (n - 1) / 2; ++k)
        v -= 2.0 * std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
    }
    w[i] = 2.0 * v / n;
  }
  w[0] = w[n] = (n % 2 == 0) ? 1.0 / (n2 - 1.0) : 1.0 / n2;
  const double hw = grid.interval().half_width;
  for (double& x : w) x *= hw;
  return w;
}

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw InvalidOrderError("Gauss-Legendre rule needs n >= 1");
  // P_n(x) and P_n'(x) by the three-term recurrence
  auto legendre = [n](double x) {
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    return std::pair{p1, n * (x * p1 - p0) / (x * x - 1.0)};
  };
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    for (int iter = 0; iter < 100; ++iter) {
      const auto [p, dp] = legendre(x);
      const double dx = p / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double dp = legendre(x).second;
    rule.nodes[i] = x;
    rule.nodes[n - 1 - i] = -x;
    rule.weights[i] = rule.weights[n - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

DiscreteOperator sine_galerkin_operator(int basis_size, double c,
                                        Interval interval,
                                        PotentialEntries entries) {
  if (basis_size < 8) {
    throw InvalidOrderError("sine basis size must be >= 8, got " +
                            std::to_string(basis_size));
  }
  if (!(c >= 0.0)) throw DomainError("potential coefficient must be >= 0");
  if (!(interval.half_width > 0.0)) throw DomainError("empty interval");
  const int m = basis_size;
  const double width = interval.diameter();

  // potential matrix for the unit interval; scales by width^2 below
  Eigen::MatrixXd p(m, m);
  if (entries == PotentialEntries::closed_form) {
    for (int j = 1; j <= m; ++j)
      for (int k = 1; k <= m; ++k)
        p(j - 1, k - 1) = shifted_square_cosine_moment(std::abs(j - k)) -
                          shifted_square_cosine_moment(j + k);
  } else {
    const QuadratureRule rule = gauss_legendre(4 * m);
    double check = 0.0;
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double s = 0.5 * rule.nodes[q];
      check += 0.5 * rule.weights[q] * s * s;
    }
    if (std::abs(check - 1.0 / 12.0) > 1e-13) {
      throw AccuracyError("Gauss-Legendre self-check failed for sine Galerkin");
    }
    p.setZero();
    for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
      const double s = 0.5 * rule.nodes[q];
      const double w = 0.5 * rule.weights[q] * s * s * 2.0;
      for (int j = 1; j <= m; ++j) {
        const double sj = std::sin(j * kPi * (s + 0.5));
        for (int k = j; k <= m; ++k)
          p(j - 1, k - 1) += w * sj * std::sin(k * kPi * (s + 0.5));
      }
    }
    p.triangularView<Eigen::StrictlyLower>() = p.transpose();
  }

  Eigen::MatrixXd a = (c * width * width) * p;
  for (int k = 1; k <= m; ++k) a(k - 1, k - 1) += (k * kPi / width) * (k * kPi / width);
  return DiscreteOperator(std::move(a), {}, 0, true);
}

double barycentric_eval(const ChebGrid& grid, std::span<const double> values,
                        double s) {
  const auto nodes = grid.full_nodes();
  if (values.size() != nodes.size()) {
    throw ContractViolation("barycentric_eval needs one value per full node");
  }
  const double hw = grid.interval().half_width;
  if (!(std::abs(s) <= hw)) {
    throw DomainError("evaluation point " + std::to_string(s) +
                      " outside the interval");
  }
  const int n = grid.order();
  double num = 0.0, den = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double diff = s - nodes[j];
    if (diff == 0.0) return values[j];
    double w = (j % 2 == 0) ? 1.0 : -1.0;
    if (j == 0 || j == n) w *= 0.5;
    w /= diff;
    num += w * values[j];
    den += w;
  }
  return num / den;
}

}  // namespace gaussgap
