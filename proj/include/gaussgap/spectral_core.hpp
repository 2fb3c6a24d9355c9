#pragma once

// Discretization primitives for Dirichlet problems on symmetric intervals:
// Chebyshev-Gauss-Lobatto grids and collocation differentiation, a sine
// Galerkin basis for -d²/ds² + c s², quadrature rules, and barycentric
// interpolation for evaluating grid functions between nodes.

#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace gaussgap {

/// Symmetric interval (-half_width, half_width).
struct Interval {
  double half_width = 0.5;

  /// Throws DomainError unless D > 0.
  static Interval with_diameter(double diameter);

  double diameter() const { return 2.0 * half_width; }
  double center() const { return 0.0; }
};

/// Chebyshev-Gauss-Lobatto points of a given order mapped to an interval.
///
/// Nodes are stored in the classical descending order
/// x_j = half_width * cos(j*pi/N), j = 0..N, so full_nodes().front() is the
/// right endpoint. The two endpoints are exactly +/- half_width and, for
/// even N, the middle node is exactly 0.
class ChebGrid {
 public:
  int order() const { return order_; }
  const Interval& interval() const { return interval_; }
  std::span<const double> full_nodes() const { return full_nodes_; }
  std::span<const double> interior_nodes() const {
    return std::span<const double>(full_nodes_).subspan(1, full_nodes_.size() - 2);
  }
  bool has_center_node() const { return order_ % 2 == 0; }
  /// Index of s = 0 in full_nodes(); only meaningful for even orders.
  int center_index() const { return order_ / 2; }

 private:
  friend ChebGrid cheb_grid(int order, Interval interval);

  int order_ = 0;
  Interval interval_;
  std::vector<double> full_nodes_;
};

/// Throws InvalidOrderError for order < 8 and DomainError for half_width <= 0.
ChebGrid cheb_grid(int order, Interval interval);

/// Square operator matrix with the coordinates of the unknowns it acts on.
///
/// coordinate_dim is 1 for interval grids, 2 for planar grids, and 0 for modal
/// bases that have no nodes. A symmetric flag is only accepted when the matrix
/// actually is symmetric to 1e-12 relative to its largest entry.
class DiscreteOperator {
 public:
  using Dense = Eigen::MatrixXd;
  using Sparse = Eigen::SparseMatrix<double>;

  DiscreteOperator(Dense matrix, std::vector<double> coordinates,
                   int coordinate_dim, bool symmetric);
  DiscreteOperator(Sparse matrix, std::vector<double> coordinates,
                   int coordinate_dim, bool symmetric);

  Eigen::Index dimension() const;
  bool is_sparse() const { return is_sparse_; }
  bool symmetric() const { return symmetric_; }
  int coordinate_dim() const { return coordinate_dim_; }
  std::span<const double> coordinates() const { return coordinates_; }

  /// Throws ContractViolation when the storage does not match.
  const Dense& dense() const;
  const Sparse& sparse() const;

  double max_abs_entry() const;
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;

 private:
  void validate();

  Dense dense_;
  Sparse sparse_;
  bool is_sparse_ = false;
  std::vector<double> coordinates_;
  int coordinate_dim_ = 0;
  bool symmetric_ = false;
};

/// Full (N+1)x(N+1) first-derivative collocation matrix on the grid.
Eigen::MatrixXd cheb_differentiation_matrix(const ChebGrid& grid);

/// Second-derivative collocation matrix with Dirichlet conditions, obtained by
/// squaring the full first-derivative matrix and deleting the boundary rows
/// and columns. Acts on values at interior nodes; not symmetric.
DiscreteOperator cheb_dirichlet_second_derivative(const ChebGrid& grid);

/// Clenshaw-Curtis weights on full_nodes(); integrates polynomials of degree
/// <= N exactly over the interval.
std::vector<double> clenshaw_curtis_weights(const ChebGrid& grid);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [-1, 1].
QuadratureRule gauss_legendre(int n);

enum class PotentialEntries { closed_form, quadrature };

/// Symmetric M x M matrix of -d²/ds² + c s² on the interval in the orthonormal
/// basis sqrt(2/L) sin(k pi (s/L + 1/2)), k = 1..M, where L is the width.
///
/// The quadrature variant uses 4M Gauss-Legendre points and throws
/// AccuracyError when the rule fails its self-check.
DiscreteOperator sine_galerkin_operator(
    int basis_size, double c, Interval interval = Interval{0.5},
    PotentialEntries entries = PotentialEntries::closed_form);

/// Chebyshev barycentric interpolation of values given on full_nodes().
/// Returns the stored value at a node; throws DomainError outside the interval.
double barycentric_eval(const ChebGrid& grid, std::span<const double> values,
                        double s);

}  // namespace gaussgap
