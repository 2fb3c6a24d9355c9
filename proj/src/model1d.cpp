#include "gaussgap/model1d.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gaussgap/eigensolve.hpp"
#include "gaussgap/error.hpp"

namespace gaussgap {

namespace {

constexpr double kRefineTolerance = 1e-10;
constexpr double kPositivityFloor = 1e-12;
constexpr double kSampleTolerance = 1e-11;

std::vector<double> matvec(const Eigen::MatrixXd& m, const std::vector<double>& f) {
  const Eigen::VectorXd out =
      m * Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
  return {out.begin(), out.end()};
}

void normalize(const ChebGrid& grid, std::vector<double>& f) {
  const double norm = std::sqrt(l2_norm_squared(grid, f));
  for (double& x : f) x /= norm;
}

// phi2 changes sign once; orthogonality to phi1 makes ∫ s phi1 phi2 positive
// exactly when phi2 is positive to the right of its node.
void orient_second(const ChebGrid& grid, const std::vector<double>& phi1,
                   std::vector<double>& phi2) {
  const auto w = clenshaw_curtis_weights(grid);
  const auto s = grid.full_nodes();
  double moment = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) moment += w[j] * s[j] * phi1[j] * phi2[j];
  if (moment < 0.0)
    for (double& x : phi2) x = -x;
}

Spectrum1D solve_at_order(Interval interval, const Potential& potential,
                          int order) {
  const ChebGrid grid = cheb_grid(order, interval);
  const DiscreteOperator d2 = cheb_dirichlet_second_derivative(grid);
  const auto nodes = grid.full_nodes();

  std::vector<double> q(nodes.size());
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    q[j] = potential(nodes[j]);
    if (!std::isfinite(q[j])) {
      throw ContractViolation("potential is not finite at s = " +
                              std::to_string(nodes[j]));
    }
  }
  Eigen::MatrixXd a = -d2.dense();
  for (int i = 0; i < order - 1; ++i) a(i, i) += q[i + 1];
  const auto interior = grid.interior_nodes();
  const DiscreteOperator op(std::move(a),
                            std::vector<double>(interior.begin(), interior.end()),
                            1, false);
  const EigenPairs pairs = smallest_general(op, 2);

  Spectrum1D out;
  out.diameter = interval.diameter();
  out.gauge = Gauge::schrodinger;
  out.lambda1 = pairs.values[0];
  out.lambda2 = pairs.values[1];
  if (out.lambda2 - out.lambda1 <= 1e-10 * std::max(1.0, std::abs(out.lambda1))) {
    throw SpectralExtractionError("first Dirichlet eigenvalue is numerically degenerate");
  }
  out.grid = grid;
  out.potential = std::move(q);
  out.phi1.assign(order + 1, 0.0);
  out.phi2.assign(order + 1, 0.0);
  for (int i = 0; i < order - 1; ++i) {
    out.phi1[i + 1] = pairs.vectors[0][i];
    out.phi2[i + 1] = pairs.vectors[1][i];
  }
  normalize(grid, out.phi1);
  normalize(grid, out.phi2);
  if (barycentric_eval(grid, out.phi1, 0.0) < 0.0)
    for (double& x : out.phi1) x = -x;
  orient_second(grid, out.phi1, out.phi2);
  return out;
}

// Largest difference between coarse samples and the fine samples at the same
// points; Lobatto nodes of order N are every second node of order 2N.
double sample_change(const std::vector<double>& coarse, const std::vector<double>& fine) {
  double change = 0.0, scale = 0.0;
  for (std::size_t j = 0; j < coarse.size(); ++j) {
    change = std::max(change, std::abs(coarse[j] - fine[2 * j]));
    scale = std::max(scale, std::abs(fine[2 * j]));
  }
  return change / scale;
}

bool settled(const Spectrum1D& coarse, const Spectrum1D& fine) {
  auto rel = [](double a, double b) {
    return std::abs(a - b) / std::max(std::abs(b), 1e-300);
  };
  return rel(coarse.lambda1, fine.lambda1) < kRefineTolerance &&
         rel(coarse.lambda2, fine.lambda2) < kRefineTolerance &&
         sample_change(coarse.phi1, fine.phi1) < kSampleTolerance &&
         sample_change(coarse.phi2, fine.phi2) < kSampleTolerance;
}

void check_convex(const ChebGrid& grid, const Potential& v) {
  const auto desc = grid.full_nodes();
  std::vector<double> x(desc.rbegin(), desc.rend());
  std::vector<double> y(x.size());
  double scale = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    y[i] = v(x[i]);
    if (!std::isfinite(y[i])) throw ContractViolation("added potential is not finite");
    scale = std::max(scale, std::abs(y[i]));
  }
  for (std::size_t i = 1; i + 1 < x.size(); ++i) {
    const double right = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
    const double left = (y[i] - y[i - 1]) / (x[i] - x[i - 1]);
    if (right - left < -1e-9 * scale) {
      throw ContractViolation("added potential is not convex near s = " +
                              std::to_string(x[i]));
    }
  }
}

Spectrum1D as_schrodinger(const Spectrum1D& s) {
  return s.gauge == Gauge::schrodinger ? s : to_gauge(s, Gauge::schrodinger);
}

}  // namespace

std::string_view to_string(Gauge gauge) {
  return gauge == Gauge::schrodinger ? "schrodinger" : "ou";
}

std::optional<Gauge> parse_gauge(std::string_view text) {
  if (text == "ou" || text == "ornstein_uhlenbeck" || text == "ornstein-uhlenbeck")
    return Gauge::ornstein_uhlenbeck;
  if (text == "schrodinger") return Gauge::schrodinger;
  return std::nullopt;
}

double l2_norm_squared(const ChebGrid& grid, const std::vector<double>& f) {
  const auto w = clenshaw_curtis_weights(grid);
  double sum = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) sum += w[j] * f[j] * f[j];
  return sum;
}

Spectrum1D solve_schrodinger(Interval interval, const Potential& potential,
                             const SolveOptions& options) {
  int order = options.order;
  Spectrum1D current = solve_at_order(interval, potential, order);
  if (options.refine) {
    while (true) {
      if (2 * order > options.max_order) {
        std::ostringstream msg;
        msg << "eigenvalues not settled at order " << order << " (lambda1 "
            << current.lambda1 << ", lambda2 " << current.lambda2 << ")";
        throw ConvergenceError(msg.str());
      }
      order *= 2;
      Spectrum1D finer = solve_at_order(interval, potential, order);
      // keep the coarser grid once the finer one confirms it; round-off in
      // spectral derivatives grows with the order
      if (settled(current, finer)) break;
      current = std::move(finer);
    }
  }
  // Far out in the Gaussian tail phi1 drops below round-off; only a sign
  // change above that level counts as a violation.
  const auto nodes = current.grid.full_nodes();
  const double floor = -kPositivityFloor *
                       *std::max_element(current.phi1.begin(), current.phi1.end());
  for (int i = 1; i < current.grid.order(); ++i) {
    if (!(current.phi1[i] > floor)) {
      throw PositivityViolation("first eigenfunction is not positive at s = " +
                                std::to_string(nodes[i]));
    }
  }
  current.lambda2 += options.lambda2_offset;
  return current;
}

Spectrum1D solve_scaled_spectrum(double dparam, const SolveOptions& options) {
  if (!(dparam >= 0.0) || !std::isfinite(dparam)) {
    throw DomainError("scaled diameter must be >= 0");
  }
  if (options.order < 32) {
    throw InvalidOrderError("scaled solve needs order >= 32, got " +
                            std::to_string(options.order));
  }
  const double c = 0.25 * std::pow(dparam, 4);
  return solve_schrodinger(Interval{0.5}, [c](double s) { return c * s * s; }, options);
}

ScaledEigenvalues solve_scaled(double dparam, const SolveOptions& options) {
  const Spectrum1D s = solve_scaled_spectrum(dparam, options);
  return {s.lambda1, s.lambda2, s.grid.order()};
}

Spectrum1D solve_model(double diameter, Gauge gauge, const SolveOptions& options,
                       const Potential& added_potential) {
  const Interval interval = Interval::with_diameter(diameter);
  Potential q = [](double s) { return 0.25 * s * s; };
  if (added_potential) {
    check_convex(cheb_grid(options.order, interval), added_potential);
    q = [added_potential](double s) { return 0.25 * s * s + added_potential(s); };
  }
  Spectrum1D out = solve_schrodinger(interval, q, options);
  out.has_added_potential = static_cast<bool>(added_potential);
  return gauge == Gauge::schrodinger ? out : to_gauge(out, gauge);
}

Spectrum1D to_gauge(const Spectrum1D& spectrum, Gauge gauge) {
  if (spectrum.gauge == gauge) return spectrum;
  Spectrum1D out = spectrum;
  // drift = potential form * e^{s²/4}; eigenvalues of the drift form are 1/2 lower
  const double sign = gauge == Gauge::ornstein_uhlenbeck ? 1.0 : -1.0;
  const auto s = out.grid.full_nodes();
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double factor = std::exp(sign * 0.25 * s[j] * s[j]);
    out.phi1[j] *= factor;
    out.phi2[j] *= factor;
  }
  normalize(out.grid, out.phi1);
  normalize(out.grid, out.phi2);
  out.lambda1 -= sign * 0.5;
  out.lambda2 -= sign * 0.5;
  out.gauge = gauge;
  return out;
}

NormalizedGap normalized_gap(double diameter, const SolveOptions& options) {
  if (!(diameter > 0.0)) throw DomainError("diameter must be positive");
  const ScaledEigenvalues scaled = solve_scaled(diameter, options);
  NormalizedGap out;
  out.diameter = diameter;
  out.gap = scaled.gap() / (diameter * diameter);
  out.normalized = scaled.gap() / (3.0 * std::numbers::pi * std::numbers::pi);
  return out;
}

RatioFunction ratio_function(const Spectrum1D& input) {
  const Spectrum1D spec = as_schrodinger(input);
  const int n = spec.grid.order();
  const auto nodes = spec.grid.full_nodes();
  for (int i = 1; i < n; ++i) {
    if (!(spec.phi1[i] > 0.0)) {
      throw PositivityViolation("phi1 vanishes or is negative at s = " +
                                std::to_string(nodes[i]));
    }
  }
  const Eigen::MatrixXd d1 = cheb_differentiation_matrix(spec.grid);
  const auto dphi1 = matvec(d1, spec.phi1);
  const auto dphi2 = matvec(d1, spec.phi2);

  RatioFunction r;
  r.nodes.assign(nodes.begin(), nodes.end());
  r.w.resize(n + 1);
  for (int i = 1; i < n; ++i) r.w[i] = 0.5 * spec.phi2[i] / spec.phi1[i];
  r.w[0] = 0.5 * dphi2[0] / dphi1[0];
  r.w[n] = 0.5 * dphi2[n] / dphi1[n];
  r.dw = matvec(d1, r.w);
  const double slope = barycentric_eval(spec.grid, r.dw, 0.0);
  if (!(slope != 0.0) || !std::isfinite(slope)) {
    throw LemmaViolation("ratio function has zero slope at the centre");
  }
  r.scale = 1.0 / slope;
  for (double& x : r.w) x *= r.scale;
  for (double& x : r.dw) x *= r.scale;
  r.d2w = matvec(d1, r.dw);
  return r;
}

double ratio_ode_residual(const Spectrum1D& input, const RatioFunction& ratio) {
  const Spectrum1D spec = as_schrodinger(input);
  const auto dphi1 = matvec(cheb_differentiation_matrix(spec.grid), spec.phi1);
  const double gap = spec.gap();
  double worst = 0.0;
  for (int i = 1; i < spec.grid.order(); ++i) {
    const double res = ratio.d2w[i] + gap * ratio.w[i] +
                       2.0 * ratio.dw[i] * dphi1[i] / spec.phi1[i];
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

double crossing_point(const Spectrum1D& input, int samples) {
  const Spectrum1D spec = as_schrodinger(input);
  const double hw = spec.grid.interval().half_width;
  auto g = [&](double s) {
    const double a = barycentric_eval(spec.grid, spec.phi1, s);
    const double b = barycentric_eval(spec.grid, spec.phi2, s);
    return a * a - b * b;
  };
  std::vector<double> s(samples), gs(samples);
  for (int k = 0; k < samples; ++k) {
    s[k] = hw * (k + 1) / (samples + 1.0);
    gs[k] = g(s[k]);
  }
  int changes = 0;
  int bracket = -1;
  for (int k = 0; k + 1 < samples; ++k) {
    if (gs[k] == 0.0 || (gs[k] > 0.0) != (gs[k + 1] > 0.0)) {
      ++changes;
      bracket = k;
    }
  }
  if (!(gs.front() > 0.0) || changes != 1) {
    std::ostringstream msg;
    msg << "phi1^2 - phi2^2 has " << changes
        << " sign changes on (0, D/2) (first sample value " << gs.front() << ")";
    throw LemmaViolation(msg.str());
  }
  double lo = s[bracket], hi = s[bracket + 1];
  for (int it = 0; it < 200 && hi - lo > 4e-16 * hw; ++it) {
    const double mid = 0.5 * (lo + hi);
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<double> drift_gauge_second_derivative(const Spectrum1D& spectrum) {
  const Spectrum1D drift = to_gauge(spectrum, Gauge::ornstein_uhlenbeck);
  const Eigen::MatrixXd d1 = cheb_differentiation_matrix(drift.grid);
  const auto u2 = matvec(d1, matvec(d1, drift.phi1));
  return std::vector<double>(u2.begin() + 1, u2.end() - 1);
}

LogConcavityProfile log_concavity_profile(const Spectrum1D& spectrum) {
  const auto& grid = spectrum.grid;
  const auto nodes = grid.full_nodes();
  const Eigen::MatrixXd d1 = cheb_differentiation_matrix(grid);
  const auto dphi = matvec(d1, spectrum.phi1);
  const auto d2phi = matvec(d1, dphi);

  LogConcavityProfile p;
  const double limit = 0.5 * spectrum.diameter - spectrum.diameter / 100.0;
  for (std::size_t j = 1; j + 1 < nodes.size(); ++j) {
    if (std::abs(nodes[j]) > limit) continue;
    const double dl = dphi[j] / spectrum.phi1[j];
    p.nodes.push_back(nodes[j]);
    p.log_derivative.push_back(dl);
    p.log_second_derivative.push_back(d2phi[j] / spectrum.phi1[j] - dl * dl);
  }
  const auto u2 = drift_gauge_second_derivative(spectrum);
  p.max_drift_second_derivative = *std::max_element(u2.begin(), u2.end());
  if (!(p.max_drift_second_derivative < 0.0)) {
    throw LemmaViolation("first eigenfunction is not strictly concave: max phi1'' = " +
                         std::to_string(p.max_drift_second_derivative));
  }
  return p;
}

LogDerivative::LogDerivative(const Spectrum1D& spectrum)
    : grid_(spectrum.grid),
      phi_(spectrum.phi1),
      dphi_(matvec(cheb_differentiation_matrix(spectrum.grid), spectrum.phi1)) {}

double LogDerivative::operator()(double s) const {
  return barycentric_eval(grid_, dphi_, s) / barycentric_eval(grid_, phi_, s);
}

std::pair<double, double> scaled_eigenvalue_derivatives(double dparam,
                                                        const SolveOptions& options) {
  const Spectrum1D spec = solve_scaled_spectrum(dparam, options);
  const auto w = clenshaw_curtis_weights(spec.grid);
  const auto s = spec.grid.full_nodes();
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) {
    m1 += w[j] * s[j] * s[j] * spec.phi1[j] * spec.phi1[j];
    m2 += w[j] * s[j] * s[j] * spec.phi2[j] * spec.phi2[j];
  }
  // the integrand is even, so the full-interval integral is twice the half
  const double d3 = dparam * dparam * dparam;
  return {d3 * m1, d3 * m2};
}

}  // namespace gaussgap
