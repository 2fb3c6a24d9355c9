#include "gaussgap/domain2d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gaussgap/eigensolve.hpp"
#include "gaussgap/error.hpp"

namespace gaussgap {

namespace {

constexpr double kInsideMargin = 1e-12;

void require_length(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    std::ostringstream msg;
    msg << name << " must be a positive finite length, got " << v;
    throw DomainError(msg.str());
  }
}

double cross(Point2 o, Point2 a, Point2 b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

double dist(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

double polygon_scale(const std::vector<Point2>& v) {
  double s = 0.0;
  for (const auto& p : v) s = std::max({s, std::abs(p.x), std::abs(p.y)});
  return s;
}

void validate_polygon(const std::vector<Point2>& v) {
  const std::size_t n = v.size();
  if (n < 3) throw DomainError("polygon needs at least 3 vertices");
  for (const auto& p : v) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw DomainError("polygon vertex is not finite");
  }
  const double scale = polygon_scale(v);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = cross(v[i], v[(i + 1) % n], v[(i + 2) % n]);
    if (!(c > 1e-12 * scale * scale)) {
      std::ostringstream msg;
      msg << "polygon is not strictly convex and counterclockwise at vertex "
          << (i + 1) % n;
      throw DomainError(msg.str());
    }
  }
  // a star polygon turns left at every vertex but winds more than once
  double angle = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = v[i], b = v[(i + 1) % n], c = v[(i + 2) % n];
    angle += std::atan2(cross(a, b, c),
                        (b.x - a.x) * (c.x - b.x) + (b.y - a.y) * (c.y - b.y));
  }
  if (std::abs(angle - 2.0 * std::numbers::pi) > 1e-6) {
    throw DomainError("polygon winds around more than once");
  }
}

Spectrum2D from_values(std::vector<double> values, Method method) {
  Spectrum2D out;
  out.method = method;
  out.values = std::move(values);
  out.lambda1 = out.values[0];
  out.lambda2 = out.values.size() > 1 ? out.values[1] : out.values[0];
  if (out.values.size() > 1 &&
      out.lambda2 - out.lambda1 <= 1e-10 * std::max(1.0, std::abs(out.lambda1))) {
    throw SpectralExtractionError("first eigenvalue of the 2-D problem is degenerate");
  }
  return out;
}

}  // namespace

DomainSpec2D::DomainSpec2D(Shape shape) : shape_(std::move(shape)) {
  if (const auto* r = std::get_if<Rectangle>(&shape_)) {
    require_length(r->w, "rectangle width w");
    require_length(r->h, "rectangle height h");
  } else if (const auto* e = std::get_if<Ellipse>(&shape_)) {
    require_length(e->a, "ellipse semi-axis a");
    require_length(e->b, "ellipse semi-axis b");
  } else {
    validate_polygon(std::get<ConvexPolygon>(shape_).vertices);
  }
}

DomainSpec2D DomainSpec2D::rectangle(double w, double h) { return DomainSpec2D(Rectangle{w, h}); }

DomainSpec2D DomainSpec2D::ellipse(double a, double b) { return DomainSpec2D(Ellipse{a, b}); }

DomainSpec2D DomainSpec2D::polygon(std::vector<Point2> vertices) {
  return DomainSpec2D(ConvexPolygon{std::move(vertices)});
}

DomainSpec2D DomainSpec2D::regular_polygon(int n, double circumradius) {
  if (n < 3) throw DomainError("regular polygon needs at least 3 sides");
  require_length(circumradius, "circumradius");
  std::vector<Point2> v;
  for (int k = 0; k < n; ++k) {
    const double t = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi * k / n;
    v.push_back({circumradius * std::cos(t), circumradius * std::sin(t)});
  }
  return polygon(std::move(v));
}

std::string_view DomainSpec2D::kind() const {
  if (std::holds_alternative<Rectangle>(shape_)) return "rectangle";
  if (std::holds_alternative<Ellipse>(shape_)) return "ellipse";
  return "polygon";
}

bool DomainSpec2D::contains(double x, double y) const {
  if (const auto* r = std::get_if<Rectangle>(&shape_)) {
    return std::abs(x) < 0.5 * r->w * (1.0 - kInsideMargin) &&
           std::abs(y) < 0.5 * r->h * (1.0 - kInsideMargin);
  }
  if (const auto* e = std::get_if<Ellipse>(&shape_)) {
    return (x / e->a) * (x / e->a) + (y / e->b) * (y / e->b) < 1.0 - kInsideMargin;
  }
  const auto& v = std::get<ConvexPolygon>(shape_).vertices;
  const double scale = polygon_scale(v);
  const Point2 p{x, y};
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Point2 a = v[i], b = v[(i + 1) % v.size()];
    // signed distance to the edge line, positive inside
    if (!(cross(a, b, p) / dist(a, b) > kInsideMargin * scale)) return false;
  }
  return true;
}

Point2 DomainSpec2D::half_extent() const {
  if (const auto* r = std::get_if<Rectangle>(&shape_)) return {0.5 * r->w, 0.5 * r->h};
  if (const auto* e = std::get_if<Ellipse>(&shape_)) return {e->a, e->b};
  Point2 out;
  for (const auto& p : std::get<ConvexPolygon>(shape_).vertices) {
    out.x = std::max(out.x, std::abs(p.x));
    out.y = std::max(out.y, std::abs(p.y));
  }
  return out;
}

double polygon_diameter(std::span<const Point2> v) {
  const std::size_t n = v.size();
  if (n < 2) return 0.0;
  if (n == 2) return dist(v[0], v[1]);
  double best = 0.0;
  std::size_t j = 1;
  for (std::size_t i = 0; i < n; ++i) {
    const Point2 a = v[i], b = v[(i + 1) % n];
    // advance the antipodal vertex while the triangle area grows
    while (cross(a, b, v[(j + 1) % n]) > cross(a, b, v[j])) j = (j + 1) % n;
    best = std::max({best, dist(a, v[j]), dist(b, v[j])});
  }
  return best;
}

double diameter(const DomainSpec2D& domain) {
  const auto& s = domain.shape();
  if (const auto* r = std::get_if<Rectangle>(&s)) return std::hypot(r->w, r->h);
  if (const auto* e = std::get_if<Ellipse>(&s)) return 2.0 * std::max(e->a, e->b);
  return polygon_diameter(std::get<ConvexPolygon>(s).vertices);
}

int MaskedGrid::row(int i, int j) const {
  if (i < -nx || i > nx || j < -ny || j > ny) return -1;
  return index[static_cast<std::size_t>((j + ny) * (2 * nx + 1) + (i + nx))];
}

MaskedGrid masked_grid(const DomainSpec2D& domain, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw ResolutionError("grid step must be positive");
  const Point2 ext = domain.half_extent();
  MaskedGrid g;
  g.h = h;
  const double cap = 1e4;
  if (ext.x / h > cap || ext.y / h > cap) {
    throw ResolutionError("grid step is too small for the domain size");
  }
  g.nx = static_cast<int>(std::floor(ext.x / h));
  g.ny = static_cast<int>(std::floor(ext.y / h));
  g.index.assign(static_cast<std::size_t>(2 * g.nx + 1) * (2 * g.ny + 1), -1);
  int next = 0;
  for (int j = -g.ny; j <= g.ny; ++j) {
    for (int i = -g.nx; i <= g.nx; ++i) {
      const double x = i * h, y = j * h;
      if (!domain.contains(x, y)) continue;
      g.index[static_cast<std::size_t>((j + g.ny) * (2 * g.nx + 1) + (i + g.nx))] = next++;
      g.coords.push_back(x);
      g.coords.push_back(y);
    }
  }
  if (g.size() < kMinInteriorPoints) {
    std::ostringstream msg;
    msg << "grid step " << h << " leaves " << g.size() << " interior points; need at least "
        << kMinInteriorPoints;
    throw ResolutionError(msg.str());
  }
  return g;
}

DiscreteOperator masked_operator(const MaskedGrid& g, bool include_potential) {
  const double inv_h2 = 1.0 / (g.h * g.h);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(g.size()) * 5);
  for (int j = -g.ny; j <= g.ny; ++j) {
    for (int i = -g.nx; i <= g.nx; ++i) {
      const int r = g.row(i, j);
      if (r < 0) continue;
      const double x = g.coords[2 * r], y = g.coords[2 * r + 1];
      const double pot = include_potential ? 0.25 * (x * x + y * y) : 0.0;
      t.emplace_back(r, r, 4.0 * inv_h2 + pot);
      for (auto [di, dj] : {std::pair{-1, 0}, {1, 0}, {0, -1}, {0, 1}}) {
        const int c = g.row(i + di, j + dj);
        if (c >= 0) t.emplace_back(r, c, -inv_h2);
      }
    }
  }
  DiscreteOperator::Sparse a(g.size(), g.size());
  a.setFromTriplets(t.begin(), t.end());
  return DiscreteOperator(std::move(a), g.coords, 2, true);
}

std::string_view to_string(Method method) {
  return method == Method::separable ? "separable" : "fd_masked";
}

Spectrum2D fd_solve(const DomainSpec2D& domain, double h, int k, const FdOptions& options) {
  if (k < 1 || k > 3) throw ContractViolation("fd_solve supports k in {1, 2, 3}");
  const MaskedGrid grid = masked_grid(domain, h);
  const DiscreteOperator op = masked_operator(grid, options.include_potential);
  const EigenPairs pairs = smallest_sparse(op, k, options.tolerance);
  Spectrum2D out = from_values(pairs.values, Method::fd_masked);
  out.h = h;
  out.points = grid.size();
  return out;
}

Spectrum2D separable_rectangle(double w, double h_len, const SolveOptions& options) {
  require_length(w, "rectangle width");
  require_length(h_len, "rectangle height");
  const Spectrum1D x = solve_model(w, Gauge::schrodinger, options);
  const Spectrum1D y = solve_model(h_len, Gauge::schrodinger, options);
  const double a = x.lambda2 + y.lambda1;
  const double b = x.lambda1 + y.lambda2;
  Spectrum2D out = from_values({x.lambda1 + y.lambda1, std::min(a, b)}, Method::separable);
  out.second_candidates = {a, b};
  out.order = std::max(x.grid.order(), y.grid.order());
  return out;
}

std::vector<ThinRectanglePoint> thin_rectangle_experiment(double d,
                                                          const std::vector<double>& eps_list,
                                                          const SolveOptions& options) {
  require_length(d, "diameter");
  if (eps_list.empty()) throw ExperimentSetupError("no eps values given");
  for (std::size_t i = 0; i < eps_list.size(); ++i) {
    if (!(eps_list[i] > 0.0)) throw ExperimentSetupError("eps values must be positive");
    if (i > 0 && !(eps_list[i] < eps_list[i - 1]))
      throw ExperimentSetupError("eps values must be strictly descending");
  }
  const double gap_model = solve_model(d, Gauge::schrodinger, options).gap();
  std::vector<ThinRectanglePoint> out;
  for (double eps : eps_list) {
    const Spectrum1D y = solve_model(2.0 * eps, Gauge::schrodinger, options);
    if (!(y.gap() > gap_model)) {
      std::ostringstream msg;
      msg << "eps = " << eps << ": the transverse gap " << y.gap()
          << " does not exceed the model gap " << gap_model;
      throw ExperimentSetupError(msg.str());
    }
    const Spectrum2D s = separable_rectangle(d, 2.0 * eps, options);
    ThinRectanglePoint p;
    p.eps = eps;
    p.gap = s.gap();
    p.gap_model = gap_model;
    const double slack = 1e-8 * std::max(1.0, gap_model);
    p.within_bracket = p.gap >= gap_model - slack && p.gap <= gap_model + eps * eps + slack;
    out.push_back(p);
  }
  return out;
}

GapReport check_gap_bound(const DomainSpec2D& domain, double h, const SolveOptions& options) {
  GapReport r;
  r.kind = std::string(domain.kind());
  r.diameter = diameter(domain);
  r.h = h;
  r.convexity = domain.strictly_convex() ? "strict" : "non-strict";
  r.gap_model = solve_model(r.diameter, Gauge::schrodinger, options).gap();

  if (const auto* rect = std::get_if<Rectangle>(&domain.shape())) {
    const Spectrum2D s = separable_rectangle(rect->w, rect->h, options);
    SolveOptions doubled = options;
    doubled.order = 2 * options.order;
    doubled.max_order = std::max(options.max_order, doubled.order);
    const Spectrum2D fine = separable_rectangle(rect->w, rect->h, doubled);
    r.method = Method::separable;
    r.h = 0.0;
    r.lambda1 = s.lambda1;
    r.lambda2 = s.lambda2;
    r.gap_2d = s.gap();
    r.error_estimate = 2.0 * std::abs(s.gap() - fine.gap()) + 1e-10 * std::max(1.0, s.gap());
  } else {
    // the disk has a double second eigenvalue; three values keep the
    // subspace iteration well separated from the rest of the spectrum
    const Spectrum2D coarse = fd_solve(domain, h, 3);
    const Spectrum2D fine = fd_solve(domain, 0.5 * h, 3);
    r.method = Method::fd_masked;
    r.lambda1 = coarse.lambda1;
    r.lambda2 = coarse.lambda2 + options.lambda2_offset;
    r.gap_2d = r.lambda2 - r.lambda1;
    r.error_estimate = 2.0 * (4.0 / 3.0) * std::abs(coarse.gap() - fine.gap());
  }
  r.margin = r.gap_2d - r.gap_model;
  r.pass = r.margin >= -r.error_estimate;
  return r;
}

}  // namespace gaussgap
