#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "gaussgap/eigensolve.hpp"
#include "gaussgap/error.hpp"
#include "gaussgap/spectral_core.hpp"

using namespace gaussgap;

namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> sample(std::span<const double> nodes, auto f) {
  std::vector<double> out;
  for (double s : nodes) out.push_back(f(s));
  return out;
}

Eigen::VectorXd as_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

// Composite Simpson rule; used as an independent oracle for integrals.
double simpson(auto f, double a, double b, int panels = 20000) {
  const double h = (b - a) / panels;
  double sum = f(a) + f(b);
  for (int i = 1; i < panels; ++i) sum += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace

TEST_CASE("cheb_grid endpoints and centre node") {
  const ChebGrid g = cheb_grid(8, Interval{0.5});
  const auto nodes = g.full_nodes();
  REQUIRE(nodes.size() == 9);
  CHECK(nodes.front() == 0.5);
  CHECK(nodes.back() == -0.5);
  CHECK(g.has_center_node());
  CHECK(nodes[g.center_index()] == 0.0);
  CHECK_FALSE(cheb_grid(9, Interval{0.5}).has_center_node());
}

TEST_CASE("cheb_grid sizes and strict interior") {
  const ChebGrid g = cheb_grid(16, Interval{5.0});
  CHECK(g.full_nodes().size() == 17);
  CHECK(g.interior_nodes().size() == 15);
  for (double s : g.interior_nodes()) CHECK(std::abs(s) < 5.0);
  const auto nodes = g.full_nodes();
  CHECK(std::is_sorted(nodes.rbegin(), nodes.rend()));
  CHECK(std::adjacent_find(nodes.begin(), nodes.end()) == nodes.end());
}

TEST_CASE("cheb_grid node spacing at the boundary follows the cosine formula") {
  const ChebGrid g = cheb_grid(64, Interval{0.5});
  const double expected = 0.5 * (1.0 - std::cos(kPi / 64.0));
  CHECK(g.full_nodes()[0] - g.full_nodes()[1] == doctest::Approx(expected).epsilon(1e-12));
  CHECK(expected == doctest::Approx(6.02e-4).epsilon(1e-3));
}

TEST_CASE("cheb_grid rejects low orders and empty intervals") {
  CHECK_THROWS_AS(cheb_grid(7, Interval{0.5}), InvalidOrderError);
  CHECK_THROWS_AS(cheb_grid(16, Interval{0.0}), DomainError);
  CHECK_THROWS_AS(Interval::with_diameter(-1.0), DomainError);
}

TEST_CASE("full differentiation matrix squared is exact on s^2") {
  const ChebGrid g = cheb_grid(16, Interval{0.5});
  const Eigen::MatrixXd d = cheb_differentiation_matrix(g);
  const auto p = sample(g.full_nodes(), [](double s) { return s * s; });
  const Eigen::VectorXd d2p = d * (d * as_vector(p));
  CHECK((d2p.array() - 2.0).abs().maxCoeff() < 1e-10);
}

TEST_CASE("Dirichlet second derivative on polynomials vanishing at the ends") {
  const ChebGrid g = cheb_grid(16, Interval{0.5});
  const DiscreteOperator op = cheb_dirichlet_second_derivative(g);
  CHECK_FALSE(op.symmetric());
  CHECK(op.dimension() == 15);

  // s² - 1/4 has second derivative 2
  const auto p = sample(g.interior_nodes(), [](double s) { return s * s - 0.25; });
  const Eigen::VectorXd out = op.apply(as_vector(p));
  CHECK((out.array() - 2.0).abs().maxCoeff() < 1e-10);

  // (1/4 - s²) s^k, degree k + 2 <= N, for every k <= N - 2
  for (int k = 0; k <= 14; ++k) {
    auto f = [k](double s) { return (0.25 - s * s) * std::pow(s, k); };
    auto f2 = [k](double s) {
      // (1/4 s^k - s^{k+2})''
      const double a = k >= 2 ? 0.25 * k * (k - 1) * std::pow(s, k - 2) : 0.0;
      return a - (k + 2.0) * (k + 1.0) * std::pow(s, k);
    };
    const Eigen::VectorXd got = op.apply(as_vector(sample(g.interior_nodes(), f)));
    const auto want = sample(g.interior_nodes(), f2);
    CHECK_MESSAGE((got - as_vector(want)).cwiseAbs().maxCoeff() < 1e-10, "k = " << k);
  }
}

TEST_CASE("Dirichlet second derivative on a sine mode") {
  const ChebGrid g = cheb_grid(32, Interval{0.5});
  const DiscreteOperator op = cheb_dirichlet_second_derivative(g);
  const auto p = sample(g.interior_nodes(), [](double s) { return std::sin(kPi * (s + 0.5)); });
  const Eigen::VectorXd out = op.apply(as_vector(p));
  CHECK((out + kPi * kPi * as_vector(p)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("smallest eigenvalue of the collocation Laplacian is pi^2") {
  const ChebGrid g = cheb_grid(32, Interval{0.5});
  const Eigen::MatrixXd a = -cheb_dirichlet_second_derivative(g).dense();
  const Eigen::VectorXcd ev = a.eigenvalues();
  double smallest = 1e300;
  for (auto z : ev) smallest = std::min(smallest, std::abs(z.real()));
  CHECK(std::abs(smallest - kPi * kPi) < 1e-8);
}

TEST_CASE("Clenshaw-Curtis integrates polynomials up to the order") {
  const ChebGrid g = cheb_grid(16, Interval{1.5});
  const auto w = clenshaw_curtis_weights(g);
  const auto s = g.full_nodes();
  for (int k = 0; k <= 16; ++k) {
    double sum = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) sum += w[j] * std::pow(s[j], k);
    const double exact = (k % 2) ? 0.0 : 2.0 * std::pow(1.5, k + 1) / (k + 1);
    CHECK(sum == doctest::Approx(exact).epsilon(1e-13));
  }
}

TEST_CASE("Gauss-Legendre rule is exact to degree 2n-1") {
  for (int n : {1, 2, 5, 12, 64}) {
    const QuadratureRule r = gauss_legendre(n);
    for (int k = 0; k < 2 * n; ++k) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) sum += r.weights[i] * std::pow(r.nodes[i], k);
      const double exact = (k % 2) ? 0.0 : 2.0 / (k + 1);
      CHECK(std::abs(sum - exact) < 1e-13);
    }
  }
}

TEST_CASE("sine Galerkin operator without potential is diagonal") {
  const DiscreteOperator op = sine_galerkin_operator(10, 0.0);
  CHECK(op.symmetric());
  const auto& a = op.dense();
  for (int j = 0; j < 10; ++j) {
    for (int k = 0; k < 10; ++k) {
      const double want = j == k ? (j + 1) * (j + 1) * kPi * kPi : 0.0;
      CHECK(a(j, k) == doctest::Approx(want).epsilon(1e-14));
    }
  }
}

TEST_CASE("sine Galerkin potential entries match quadrature") {
  const DiscreteOperator op = sine_galerkin_operator(8, 1.0);
  const double p11 = op.dense()(0, 0) - kPi * kPi;
  CHECK(p11 == doctest::Approx(1.0 / 12.0 - 1.0 / (2.0 * kPi * kPi)).epsilon(1e-14));
  auto integrand = [](int j, int k) {
    return [j, k](double s) {
      return s * s * 2.0 * std::sin(j * kPi * (s + 0.5)) * std::sin(k * kPi * (s + 0.5));
    };
  };
  CHECK(p11 == doctest::Approx(simpson(integrand(1, 1), -0.5, 0.5)).epsilon(1e-12));
  CHECK(op.dense()(1, 3) == doctest::Approx(simpson(integrand(2, 4), -0.5, 0.5)).epsilon(1e-10));
  CHECK(std::abs(op.dense()(0, 1) - simpson(integrand(1, 2), -0.5, 0.5)) < 1e-13);

  const DiscreteOperator quad = sine_galerkin_operator(32, 3.0, Interval{0.5},
                                                       PotentialEntries::quadrature);
  const DiscreteOperator closed = sine_galerkin_operator(32, 3.0);
  CHECK((quad.dense() - closed.dense()).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("sine Galerkin reproduces the reference ground state") {
  const EigenPairs p = smallest_symmetric(sine_galerkin_operator(64, 0.25), 1);
  CHECK(std::abs(p.values[0] - 9.877771) < 1e-5);
}

TEST_CASE("collocation and Galerkin agree on the rescaled operator") {
  for (int d = 1; d <= 10; ++d) {
    const double c = 0.25 * std::pow(d, 4);
    const ChebGrid g = cheb_grid(64, Interval{0.5});
    Eigen::MatrixXd a = -cheb_dirichlet_second_derivative(g).dense();
    const auto s = g.interior_nodes();
    for (int i = 0; i < a.rows(); ++i) a(i, i) += c * s[i] * s[i];
    const auto coll = smallest_general(
        DiscreteOperator(a, std::vector<double>(s.begin(), s.end()), 1, false), 2);
    const auto gal = smallest_symmetric(sine_galerkin_operator(64, c), 2);
    CHECK_MESSAGE(std::abs(coll.values[0] - gal.values[0]) <= 1e-8, "D = " << d);
    CHECK_MESSAGE(std::abs(coll.values[1] - gal.values[1]) <= 1e-8, "D = " << d);
  }
}

TEST_CASE("barycentric interpolation") {
  const ChebGrid g = cheb_grid(16, Interval{0.5});
  const auto cube = sample(g.full_nodes(), [](double s) { return s * s * s; });
  CHECK(std::abs(barycentric_eval(g, cube, 0.123) - 0.123 * 0.123 * 0.123) < 1e-13);
  for (std::size_t j = 0; j < cube.size(); ++j)
    CHECK(barycentric_eval(g, cube, g.full_nodes()[j]) == cube[j]);
  CHECK_THROWS_AS(barycentric_eval(g, cube, 0.5000001), DomainError);
  CHECK_THROWS_AS(barycentric_eval(g, std::vector<double>(3, 0.0), 0.1), ContractViolation);
}

TEST_CASE("DiscreteOperator validates shape and symmetry flag") {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 3, 4;
  CHECK_THROWS_AS(DiscreteOperator(a, {0.0, 1.0}, 1, true), ContractViolation);
  CHECK_NOTHROW(DiscreteOperator(a, {0.0, 1.0}, 1, false));
  CHECK_THROWS_AS(DiscreteOperator(a, {0.0}, 1, false), ContractViolation);
  CHECK_THROWS_AS(DiscreteOperator(Eigen::MatrixXd(2, 3), {}, 0, false), ContractViolation);
  const DiscreteOperator dense(a, {}, 0, false);
  CHECK_THROWS_AS(dense.sparse(), ContractViolation);
}
