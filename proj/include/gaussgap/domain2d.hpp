#pragma once

// Planar convex domains and the operator -Δ + |x|²/4 with Dirichlet
// conditions. Eigenvalues are in the Schrodinger gauge; the drift-form
// eigenvalues are lower by exactly 1 in two dimensions.

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "gaussgap/model1d.hpp"
#include "gaussgap/spectral_core.hpp"

namespace gaussgap {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

/// (-w/2, w/2) x (-h/2, h/2)
struct Rectangle {
  double w = 1.0;
  double h = 1.0;
};

/// x²/a² + y²/b² < 1
struct Ellipse {
  double a = 1.0;
  double b = 1.0;
};

/// Strictly convex polygon, vertices counterclockwise.
struct ConvexPolygon {
  std::vector<Point2> vertices;
};

class DomainSpec2D {
 public:
  using Shape = std::variant<Rectangle, Ellipse, ConvexPolygon>;

  /// Throws DomainError for non-positive or non-finite lengths, fewer than
  /// three vertices, or a polygon that is not strictly convex and
  /// counterclockwise.
  explicit DomainSpec2D(Shape shape);

  static DomainSpec2D rectangle(double w, double h);
  static DomainSpec2D ellipse(double a, double b);
  static DomainSpec2D disk(double r) { return ellipse(r, r); }
  static DomainSpec2D polygon(std::vector<Point2> vertices);
  /// Regular n-gon with the given circumradius and a vertex on the +y axis.
  static DomainSpec2D regular_polygon(int n, double circumradius);

  const Shape& shape() const { return shape_; }
  std::string_view kind() const;
  bool is_rectangle() const { return std::holds_alternative<Rectangle>(shape_); }
  /// Ellipses are strictly convex; rectangles and polygons are not.
  bool strictly_convex() const { return std::holds_alternative<Ellipse>(shape_); }

  /// Point strictly inside, with a relative safety margin of 1e-12.
  bool contains(double x, double y) const;
  /// Half-extents of the bounding box about the origin.
  Point2 half_extent() const;

 private:
  Shape shape_;
};

/// Exact Euclidean diameter.
double diameter(const DomainSpec2D& domain);

/// Largest vertex distance of a convex polygon by rotating calipers.
double polygon_diameter(std::span<const Point2> ccw_vertices);

/// Lattice points (i h, j h) strictly inside the domain, ordered by row
/// (y outer, x inner).
struct MaskedGrid {
  double h = 0.0;
  int nx = 0;                 // lattice columns, i in [-nx, nx]
  int ny = 0;                 // lattice rows, j in [-ny, ny]
  std::vector<int> index;     // (j + ny)(2nx + 1) + (i + nx) -> row, or -1
  std::vector<double> coords; // x0, y0, x1, y1, ...

  int size() const { return static_cast<int>(coords.size() / 2); }
  int row(int i, int j) const;
};

inline constexpr int kMinInteriorPoints = 200;

/// Throws ResolutionError when fewer than kMinInteriorPoints points fit.
MaskedGrid masked_grid(const DomainSpec2D& domain, double h);

/// 5-point Laplacian / h² plus the diagonal |x|²/4 (unless switched off);
/// neighbours outside the mask are Dirichlet zeros.
DiscreteOperator masked_operator(const MaskedGrid& grid, bool include_potential = true);

enum class Method { fd_masked, separable };
std::string_view to_string(Method method);

struct Spectrum2D {
  Method method = Method::fd_masked;
  double h = 0.0;          // grid step (fd_masked)
  int order = 0;           // Chebyshev order of the 1-D factors (separable)
  int points = 0;          // unknowns (fd_masked)
  std::vector<double> values;  // ascending, Schrodinger gauge
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  /// separable only: (mu2x + mu1y, mu1x + mu2y)
  std::array<double, 2> second_candidates{};

  double gap() const { return lambda2 - lambda1; }
};

struct FdOptions {
  bool include_potential = true;
  double tolerance = 1e-7;
};

/// k in {1, 2, 3}. Throws SpectralExtractionError if lambda1 is degenerate.
Spectrum2D fd_solve(const DomainSpec2D& domain, double h, int k = 2,
                    const FdOptions& options = {});

/// Exact tensor solve on (-w/2, w/2) x (-h/2, h/2) from two 1-D problems.
Spectrum2D separable_rectangle(double w, double h_len, const SolveOptions& options = {});

struct ThinRectanglePoint {
  double eps = 0.0;
  double gap = 0.0;        // gap on (-D/2, D/2) x (-eps, eps)
  double gap_model = 0.0;  // 1-D model gap at D
  bool within_bracket = false;  // gap_model <= gap <= gap_model + eps² (to 1e-8)
};

/// Throws ExperimentSetupError unless eps_list is positive and strictly
/// descending and, for every eps, the y-direction gap exceeds the model gap
/// (so that the second eigenfunction is the x-excited mode).
std::vector<ThinRectanglePoint> thin_rectangle_experiment(
    double d, const std::vector<double>& eps_list, const SolveOptions& options = {});

struct GapReport {
  std::string kind;
  double diameter = 0.0;
  Method method = Method::fd_masked;
  double h = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double gap_2d = 0.0;
  double gap_model = 0.0;
  double margin = 0.0;
  double error_estimate = 0.0;
  bool pass = false;
  std::string convexity;  // "strict" or "non-strict"
};

/// Rectangles use the separable path (error estimate from a doubled
/// Chebyshev order); other domains are solved at h and h/2 and the estimate
/// is 2 * (4/3) |gap_h - gap_{h/2}|. gap_2d is the value at h.
GapReport check_gap_bound(const DomainSpec2D& domain, double h,
                          const SolveOptions& options = {});

}  // namespace gaussgap
