#pragma once

// Numerical checks of the gap estimate and of the eigenfunction properties
// of the 1-D model. Every check returns outcomes instead of throwing; a
// verdict is a deterministic function of the measured values.

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "gaussgap/domain2d.hpp"
#include "gaussgap/model1d.hpp"

namespace gaussgap {

using InputValue = std::variant<double, std::string>;

struct VerificationOutcome {
  std::string claim_id;
  std::vector<std::pair<std::string, InputValue>> inputs;
  std::vector<std::pair<std::string, double>> measured;
  double tolerance = 0.0;
  bool pass = false;
  std::string notes;

  double value(std::string_view name) const;  // throws std::out_of_range
};

struct VerifyOptions {
  SolveOptions solve;
  /// Test hook: flip the sign of phi1 before the concavity check.
  bool negate_phi1 = false;
  /// Test hook: multiply phi1 before the crossing check (breaks the unit
  /// normalization the crossing statement relies on).
  double phi1_scale = 1.0;
  std::uint64_t seed = 42;
  int sample_count = 10000;
  /// Finite-difference step for the 2-D gap checks.
  double grid_step = 1.0 / 128;
};

/// D = 0.5, 1, 2, ..., 10
std::vector<double> property_diameters();

std::vector<VerificationOutcome> verify_table_reproduction(const VerifyOptions& opt = {});
VerificationOutcome verify_monotonicity(double d_min, double d_max, double step,
                                        const VerifyOptions& opt = {});
std::vector<VerificationOutcome> verify_small_d_limit(const std::vector<double>& d_list,
                                                      const VerifyOptions& opt = {});
std::vector<VerificationOutcome> verify_collocation_vs_galerkin(
    const std::vector<double>& d_list, const VerifyOptions& opt = {});
VerificationOutcome verify_harmonic_limit(double d, const VerifyOptions& opt = {});
std::vector<VerificationOutcome> verify_concavity(const std::vector<double>& d_grid,
                                                  const VerifyOptions& opt = {});
std::vector<VerificationOutcome> verify_parity_crossing(const std::vector<double>& d_grid,
                                                        const VerifyOptions& opt = {});
std::vector<VerificationOutcome> verify_ratio_function(const std::vector<double>& d_grid,
                                                       const VerifyOptions& opt = {});
VerificationOutcome verify_eigenvalue_derivative(double d, double step,
                                                 const VerifyOptions& opt = {});
/// Two-point comparison on (-w/2, w/2) x (-h/2, h/2) with opt.sample_count
/// pairs drawn from opt.seed.
VerificationOutcome verify_log_concavity_comparison(double w, double h,
                                                    const VerifyOptions& opt = {});

struct NamedPotential {
  std::string name;
  Potential v;
  bool even = true;
};
/// V = 0, s², |s|, e^s
std::vector<NamedPotential> default_convex_potentials();
std::vector<VerificationOutcome> verify_convex_potential(
    double d, const std::vector<NamedPotential>& potentials, const VerifyOptions& opt = {});

struct NamedDomain {
  std::string name;
  DomainSpec2D domain;
};
/// square, 3x4 rectangle, unit disk, ellipse 2x1, regular pentagon
std::vector<NamedDomain> default_domains();
std::vector<VerificationOutcome> verify_gap_bound(const std::vector<NamedDomain>& domains,
                                                  const VerifyOptions& opt = {});
std::vector<VerificationOutcome> verify_thin_rectangle(double d, const std::vector<double>& eps,
                                                       const VerifyOptions& opt = {});

/// Names accepted by run_suite, in run order.
const std::vector<std::string>& suite_names();
/// Runs one named suite with its default parameters ("all" runs every suite).
/// Unknown names throw ConfigError.
std::vector<VerificationOutcome> run_suite(std::string_view name, const VerifyOptions& opt = {});

}  // namespace gaussgap
