#pragma once

// One-dimensional model problems on (-D/2, D/2) with Dirichlet conditions:
//
//   drift form       -u'' + s u'              (Ornstein-Uhlenbeck gauge)
//   potential form   -v'' + s²/4 v            (Schrodinger gauge)
//
// related by v = u e^{-s²/4}; eigenvalues differ by exactly 1/2. The rescaled
// problem -psi'' + D⁴ s²/4 psi on (-1/2, 1/2) has eigenvalues D² times the
// potential-form eigenvalues.

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gaussgap/spectral_core.hpp"

namespace gaussgap {

enum class Gauge { ornstein_uhlenbeck, schrodinger };

std::string_view to_string(Gauge gauge);
/// Accepts "ou", "ornstein_uhlenbeck", "ornstein-uhlenbeck", "schrodinger".
std::optional<Gauge> parse_gauge(std::string_view text);

using Potential = std::function<double(double)>;

struct SolveOptions {
  /// Starting Chebyshev order.
  int order = 64;
  /// Double the order until both eigenvalues change by < 1e-10 relative and
  /// the eigenfunction samples by < 1e-11 of their maximum; the coarser of
  /// the two agreeing grids is returned.
  bool refine = true;
  int max_order = 1024;
  /// Test hook: added to the second eigenvalue after extraction. Lets the
  /// verification suite demonstrate that it rejects a corrupted solver.
  double lambda2_offset = 0.0;
};

/// First two Dirichlet eigenpairs of a 1-D problem.
///
/// phi1/phi2 are samples on grid.full_nodes() (endpoint values exactly 0),
/// normalized to unit L²(ds) norm, with phi1 > 0 inside and phi2 positive to
/// the right of its nodal point. potential holds the samples of the full
/// potential in the Schrodinger gauge (s²/4 plus any added convex term).
struct Spectrum1D {
  double diameter = 0.0;
  Gauge gauge = Gauge::schrodinger;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  ChebGrid grid;
  std::vector<double> phi1;
  std::vector<double> phi2;
  std::vector<double> potential;
  bool has_added_potential = false;

  double gap() const { return lambda2 - lambda1; }
};

/// Generic solver for -v'' + q(s) v = lambda v on a symmetric interval.
/// Returned in the Schrodinger gauge. Throws SpectralExtractionError when the
/// first eigenvalue is numerically degenerate and ConvergenceError when
/// refinement cannot settle below options.max_order.
Spectrum1D solve_schrodinger(Interval interval, const Potential& potential,
                             const SolveOptions& options = {});

struct ScaledEigenvalues {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  int order = 0;

  double gap() const { return lambda2 - lambda1; }
};

/// Two smallest eigenvalues of -psi'' + dparam⁴ s²/4 psi on (-1/2, 1/2).
/// dparam = 0 is the Dirichlet Laplacian. Requires order >= 32.
ScaledEigenvalues solve_scaled(double dparam, const SolveOptions& options = {});

/// Same problem with its eigenfunctions, for quadratures in the rescaled
/// variable.
Spectrum1D solve_scaled_spectrum(double dparam, const SolveOptions& options = {});

/// The model on (-D/2, D/2) in the requested gauge, optionally with an added
/// convex potential V (checked by divided differences on the grid; a
/// violation throws ContractViolation).
Spectrum1D solve_model(double diameter, Gauge gauge,
                       const SolveOptions& options = {},
                       const Potential& added_potential = {});

/// Convert between gauges: eigenvalues shift by 1/2, eigenfunctions are
/// multiplied by e^{±s²/4} and renormalized in L²(ds).
Spectrum1D to_gauge(const Spectrum1D& spectrum, Gauge gauge);

/// Integral of f² over the interval with Clenshaw-Curtis weights.
double l2_norm_squared(const ChebGrid& grid, const std::vector<double>& f);

struct NormalizedGap {
  double diameter = 0.0;
  double gap = 0.0;         // lambda2 - lambda1 at this diameter
  double normalized = 0.0;  // gap * D² / (3 pi²)
};

NormalizedGap normalized_gap(double diameter, const SolveOptions& options = {});

/// w(s) = (1/2) phi2/phi1 rescaled so that w'(0) = 1, sampled on full nodes.
/// Endpoint values come from the ratio of one-sided derivatives.
struct RatioFunction {
  std::vector<double> nodes;
  std::vector<double> w;
  std::vector<double> dw;
  std::vector<double> d2w;
  double scale = 1.0;  // factor applied to (1/2) phi2/phi1
};

/// Throws PositivityViolation when phi1 is not positive at an interior node.
/// Spectra in the drift gauge are converted first.
RatioFunction ratio_function(const Spectrum1D& spectrum);

/// max over interior nodes of |w'' + (lambda2 - lambda1) w + 2 w' phi1'/phi1|
/// in the Schrodinger gauge.
double ratio_ode_residual(const Spectrum1D& spectrum, const RatioFunction& ratio);

/// Unique zero b in (0, D/2) of phi1² - phi2², located by bisection on
/// barycentric evaluations after a scan of `samples` points. The spectrum is
/// used as given (no renormalization), converted to the Schrodinger gauge.
/// Throws LemmaViolation when the scan does not show exactly one sign change.
double crossing_point(const Spectrum1D& spectrum, int samples = 2000);

/// Second derivative of the drift-gauge first eigenfunction at the interior
/// nodes, by spectral differentiation.
std::vector<double> drift_gauge_second_derivative(const Spectrum1D& spectrum);

struct LogConcavityProfile {
  std::vector<double> nodes;                  // |s| <= D/2 - D/100
  std::vector<double> log_derivative;         // (log phi1)'
  std::vector<double> log_second_derivative;  // (log phi1)''
  double max_drift_second_derivative = 0.0;   // max interior phi1'' (drift gauge)
};

/// Profile in the gauge of the input spectrum. Throws LemmaViolation when the
/// drift-gauge phi1'' is not negative at every interior node.
LogConcavityProfile log_concavity_profile(const Spectrum1D& spectrum);

/// (log phi1)'(s) between nodes via barycentric interpolation of phi1 and
/// its spectral derivative. Holds its own copy of the samples.
class LogDerivative {
 public:
  explicit LogDerivative(const Spectrum1D& spectrum);
  double operator()(double s) const;

 private:
  ChebGrid grid_;
  std::vector<double> phi_;
  std::vector<double> dphi_;
};

/// d lambda_i / d dparam for the rescaled problem from the quadrature
/// 2 dparam³ ∫_0^{1/2} s² psi_i² ds with unit-norm psi_i.
std::pair<double, double> scaled_eigenvalue_derivatives(
    double dparam, const SolveOptions& options = {});

}  // namespace gaussgap
