#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gaussgap/domain2d.hpp"
#include "gaussgap/domain_file.hpp"
#include "gaussgap/error.hpp"
#include "gaussgap/model1d.hpp"

using namespace gaussgap;

namespace {

constexpr double kPi = std::numbers::pi;

double brute_force_diameter(const std::vector<Point2>& v) {
  double best = 0.0;
  for (const auto& a : v)
    for (const auto& b : v) best = std::max(best, std::hypot(a.x - b.x, a.y - b.y));
  return best;
}

}  // namespace

TEST_CASE("diameters") {
  CHECK(diameter(DomainSpec2D::rectangle(3, 4)) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(diameter(DomainSpec2D::ellipse(2, 1)) == 4.0);
  CHECK(diameter(DomainSpec2D::ellipse(0.5, 3)) == 6.0);
  CHECK(diameter(DomainSpec2D::regular_polygon(6, 1.0)) == doctest::Approx(2.0).epsilon(1e-15));
  const double pentagon = 2.0 * std::sin(2.0 * kPi / 5.0);
  CHECK(diameter(DomainSpec2D::regular_polygon(5, 1.0)) == doctest::Approx(pentagon).epsilon(1e-15));
}

TEST_CASE("rotating calipers agree with the brute-force vertex scan") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> angle(0.0, 2 * kPi);
  std::uniform_real_distribution<double> axis(0.2, 5.0);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 3 + trial % 40;
    const double a = axis(rng), b = axis(rng);
    std::vector<double> t(n);
    for (double& x : t) x = angle(rng);
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    std::vector<Point2> v;
    for (double x : t) v.push_back({a * std::cos(x), b * std::sin(x)});
    CHECK(polygon_diameter(v) == doctest::Approx(brute_force_diameter(v)).epsilon(1e-15));
  }
}

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(DomainSpec2D::rectangle(0, 1), DomainError);
  CHECK_THROWS_AS(DomainSpec2D::ellipse(1, -2), DomainError);
  CHECK_THROWS_AS(DomainSpec2D::rectangle(NAN, 1), DomainError);
  // clockwise
  CHECK_THROWS_AS(DomainSpec2D::polygon({{0, 0}, {0, 1}, {1, 0}}), DomainError);
  // collinear vertex
  CHECK_THROWS_AS(DomainSpec2D::polygon({{0, 0}, {1, 0}, {2, 0}, {1, 1}}), DomainError);
  // reflex vertex
  CHECK_THROWS_AS(DomainSpec2D::polygon({{0, 0}, {2, 0}, {1, 0.5}, {2, 2}, {0, 2}}), DomainError);
  // pentagram: every turn is left but it winds twice
  std::vector<Point2> star;
  for (int k = 0; k < 5; ++k) {
    const double t = 2.0 * kPi * 2 * k / 5;
    star.push_back({std::cos(t), std::sin(t)});
  }
  CHECK_THROWS_AS(DomainSpec2D::polygon(star), DomainError);
  CHECK_THROWS_AS(DomainSpec2D::polygon({{0, 0}, {1, 0}}), DomainError);
  CHECK_NOTHROW(DomainSpec2D::polygon({{0, 0}, {1, 0}, {0, 1}}));
}

TEST_CASE("convexity flag") {
  CHECK(DomainSpec2D::disk(1).strictly_convex());
  CHECK_FALSE(DomainSpec2D::rectangle(1, 2).strictly_convex());
  CHECK_FALSE(DomainSpec2D::regular_polygon(5, 1).strictly_convex());
}

TEST_CASE("masked grid lies strictly inside") {
  const DomainSpec2D disk = DomainSpec2D::disk(1.0);
  const MaskedGrid g = masked_grid(disk, 1.0 / 16);
  for (int r = 0; r < g.size(); ++r) {
    const double x = g.coords[2 * r], y = g.coords[2 * r + 1];
    CHECK(x * x + y * y < 1.0);
  }
  const MaskedGrid sq = masked_grid(DomainSpec2D::rectangle(1, 1), 1.0 / 32);
  CHECK(sq.size() == 31 * 31);
  CHECK(sq.row(16, 0) == -1);
  CHECK(sq.row(15, 15) == sq.size() - 1);
  CHECK_THROWS_AS(masked_grid(disk, 0.25), ResolutionError);
  CHECK_THROWS_AS(masked_grid(disk, 0.0), ResolutionError);
}

TEST_CASE("masked operator is symmetric with the 5-point stencil") {
  const MaskedGrid g = masked_grid(DomainSpec2D::regular_polygon(5, 1.0), 1.0 / 16);
  const DiscreteOperator op = masked_operator(g);
  CHECK(op.symmetric());
  CHECK(op.coordinate_dim() == 2);
  const auto& a = op.sparse();
  CHECK((Eigen::MatrixXd(a) - Eigen::MatrixXd(a).transpose()).cwiseAbs().maxCoeff() == 0.0);
  for (int r = 0; r < g.size(); ++r) {
    const double x = g.coords[2 * r], y = g.coords[2 * r + 1];
    CHECK(a.coeff(r, r) == doctest::Approx(4.0 * 256 + 0.25 * (x * x + y * y)));
  }
}

TEST_CASE("fd_solve on the unit square") {
  const DomainSpec2D sq = DomainSpec2D::rectangle(1, 1);
  const Spectrum2D s = fd_solve(sq, 1.0 / 128, 2);
  CHECK(std::abs(s.lambda1 - 19.755542) <= 1e-2 * 19.755542);
  CHECK(std::abs(s.lambda2 - 49.373855) <= 1e-2 * 49.373855);
  CHECK(s.gap() > 0.0);

  FdOptions bare;
  bare.include_potential = false;
  const Spectrum2D lap = fd_solve(sq, 1.0 / 128, 1, bare);
  CHECK(std::abs(lap.lambda1 - 2 * kPi * kPi) <= 1e-2 * 2 * kPi * kPi);
  const double h = 1.0 / 128;
  const double discrete = 8.0 / (h * h) * std::pow(std::sin(kPi * h / 2), 2);
  CHECK(lap.lambda1 == doctest::Approx(discrete).epsilon(1e-10));

  CHECK_THROWS_AS(fd_solve(sq, 1.0 / 64, 4), ContractViolation);
  CHECK_THROWS_AS(fd_solve(sq, 0.1, 1), ResolutionError);
}

TEST_CASE("finite differences converge at second order on the square") {
  const DomainSpec2D sq = DomainSpec2D::rectangle(1, 1);
  std::vector<double> l;
  for (int n : {32, 64, 128, 256}) l.push_back(fd_solve(sq, 1.0 / n, 1).lambda1);
  for (int i = 0; i + 2 < 4; ++i) {
    const double ratio = (l[i + 1] - l[i]) / (l[i + 2] - l[i + 1]);
    CHECK(ratio >= 3.5);
    CHECK(ratio <= 4.5);
  }
}

TEST_CASE("disk second eigenvalue is double") {
  const Spectrum2D s = fd_solve(DomainSpec2D::disk(1.0), 1.0 / 96, 3);
  const Spectrum2D f = fd_solve(DomainSpec2D::disk(1.0), 1.0 / 192, 3);
  const double discretization = std::abs(s.lambda2 - f.lambda2);
  CHECK(std::abs(s.values[2] - s.values[1]) <= discretization);
  CHECK(s.lambda2 == s.values[1]);
}

TEST_CASE("separable rectangles") {
  const Spectrum2D sq = separable_rectangle(1, 1);
  CHECK(std::abs(sq.lambda1 - 19.755542) <= 2e-5);
  CHECK(sq.second_candidates[0] == sq.second_candidates[1]);
  CHECK(sq.lambda2 == sq.second_candidates[0]);
  CHECK(std::abs(sq.lambda2 - 49.373855) <= 2e-5);

  const Spectrum2D thin = separable_rectangle(1, 0.01);
  CHECK(std::abs(thin.gap() - 29.618313) <= 1e-4);

  // agreement with finite differences within a Richardson estimate
  for (auto [w, h] : {std::pair{1.0, 1.0}, {1.5, 0.75}, {2.0, 1.0}}) {
    const DomainSpec2D r = DomainSpec2D::rectangle(w, h);
    const double step = 1.0 / 64;
    const Spectrum2D a = fd_solve(r, step, 2);
    const Spectrum2D b = fd_solve(r, step / 2, 2);
    const Spectrum2D exact = separable_rectangle(w, h);
    const double est1 = 2.0 * (4.0 / 3.0) * std::abs(a.lambda1 - b.lambda1);
    const double est2 = 2.0 * (4.0 / 3.0) * std::abs(a.lambda2 - b.lambda2);
    CHECK(std::abs(a.lambda1 - exact.lambda1) <= est1);
    CHECK(std::abs(a.lambda2 - exact.lambda2) <= est2);
  }
}

TEST_CASE("gap is the same in both gauges") {
  // both eigenvalues shift by n/2 = 1 in the plane
  const Spectrum2D s = separable_rectangle(2.0, 1.0);
  const Spectrum1D x = solve_model(2.0, Gauge::ornstein_uhlenbeck);
  const Spectrum1D y = solve_model(1.0, Gauge::ornstein_uhlenbeck);
  CHECK(s.lambda1 - (x.lambda1 + y.lambda1) == doctest::Approx(1.0).epsilon(1e-14));
  const double ou_gap = std::min(x.lambda2 + y.lambda1, x.lambda1 + y.lambda2) -
                        (x.lambda1 + y.lambda1);
  CHECK(ou_gap == doctest::Approx(s.gap()).epsilon(1e-12));
}

TEST_CASE("thin rectangle experiment") {
  const auto pts = thin_rectangle_experiment(2.0, {0.1, 0.05, 0.01});
  REQUIRE(pts.size() == 3);
  for (const auto& p : pts) {
    CHECK(p.within_bracket);
    CHECK(p.gap >= p.gap_model - 1e-8);
    CHECK(p.gap <= p.gap_model + p.eps * p.eps + 1e-8);
  }
  CHECK(pts[1].gap <= pts[0].gap + 1e-8);
  CHECK(pts[2].gap <= pts[1].gap + 1e-8);
  CHECK(std::abs(pts[2].gap_model - 7.440203) <= 1e-5);
  CHECK(pts[2].gap >= 7.440203 - 1e-5);
  CHECK(pts[2].gap <= 7.440203 + 1e-4 + 1e-5);

  CHECK_THROWS_AS(thin_rectangle_experiment(2.0, {2.0}), ExperimentSetupError);
  CHECK_THROWS_AS(thin_rectangle_experiment(2.0, {0.01, 0.1}), ExperimentSetupError);
  CHECK_THROWS_AS(thin_rectangle_experiment(2.0, {}), ExperimentSetupError);
  CHECK_THROWS_AS(thin_rectangle_experiment(2.0, {-0.1}), ExperimentSetupError);
}

TEST_CASE("gap bound on rectangles via the separable path") {
  const GapReport sq = check_gap_bound(DomainSpec2D::rectangle(1, 1), 1.0 / 128);
  CHECK(sq.method == Method::separable);
  CHECK(sq.diameter == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(sq.gap_model == doctest::Approx(solve_model(std::sqrt(2.0), Gauge::schrodinger).gap()));
  CHECK(sq.margin >= -sq.error_estimate);
  CHECK(sq.pass);
  CHECK(sq.convexity == "non-strict");

  const GapReport thin = check_gap_bound(DomainSpec2D::rectangle(2, 0.02), 1.0 / 128);
  CHECK(thin.pass);
  CHECK(thin.margin >= 0.0);
  // the diagonal exceeds the long side, so the bracket is taken against the
  // model at D = 2
  const double model_long_side = solve_model(2.0, Gauge::schrodinger).gap();
  CHECK(thin.gap_2d >= model_long_side - 1e-8);
  CHECK(thin.gap_2d <= model_long_side + 1e-4 + 1e-5);

  const GapReport r34 = check_gap_bound(DomainSpec2D::rectangle(3, 4), 1.0 / 128);
  CHECK(r34.diameter == doctest::Approx(5.0));
  CHECK(r34.pass);
}

TEST_CASE("gap bound on the disk by finite differences") {
  const GapReport r = check_gap_bound(DomainSpec2D::disk(1.0), 1.0 / 64);
  CHECK(r.method == Method::fd_masked);
  CHECK(r.diameter == 2.0);
  CHECK(std::abs(r.gap_model - 7.440203) <= 1e-5);
  CHECK(r.margin > 0.0);
  CHECK(r.pass);
  CHECK(r.convexity == "strict");
}

TEST_CASE("domain files") {
  const DomainSpec2D r = parse_domain("# comment\n\ntype = rectangle\nw = 3   # width\nh=4\n");
  CHECK(diameter(r) == doctest::Approx(5.0));
  const DomainSpec2D e = parse_domain("type = ellipse\r\na = 2\r\nb = 1\r\n");
  CHECK(diameter(e) == 4.0);
  const DomainSpec2D p = parse_domain("type = polygon\nvertices = 0 0; 1 0; 1 1; 0 1;\n");
  CHECK(diameter(p) == doctest::Approx(std::sqrt(2.0)));

  for (const auto& d : {r, e, p, DomainSpec2D::regular_polygon(7, 1.3)}) {
    const DomainSpec2D back = parse_domain(format_domain(d));
    CHECK(format_domain(back) == format_domain(d));
    CHECK(diameter(back) == diameter(d));
  }
}

TEST_CASE("domain file errors name the key and line") {
  auto message = [](const char* text) -> std::string {
    try {
      parse_domain(text);
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "no error";
  };
  CHECK(message("type = rectangle\nw = 3\nh = abc\n") == "line 3: key 'h': 'abc' is not a decimal number");
  CHECK(message("type = rectangle\nw = 3\n") == "key 'h': required for type 'rectangle'");
  CHECK(message("w = 3\nh = 4\n") == "key 'type': required key is missing");
  CHECK(message("type = hexagon\n") ==
        "line 1: key 'type': unknown domain type 'hexagon' (rectangle, ellipse, polygon)");
  CHECK(message("type = ellipse\na = 1\nb = 1\nc = 2\n") == "line 4: key 'c': not a field of type 'ellipse'");
  CHECK(message("type = ellipse\na = 1\na = 2\nb = 1\n") ==
        "line 3: key 'a': duplicate (first set on line 2)");
  CHECK(message("type = rectangle\nw = -1\nh = 1\n") == "line 2: key 'w': must be positive");
  CHECK(message("type = rectangle\nw = 1\nh = inf\n") == "line 3: key 'h': 'inf' is not a decimal number");
  CHECK(message("type = rectangle\nw 1\n") == "line 2: expected 'key = value', got 'w 1'");
  CHECK(message("type = polygon\nvertices = 0 0; 1 0 2; 0 1\n") ==
        "line 2: key 'vertices': '1 0 2' is not an 'x y' pair");
  CHECK(message("type = polygon\nvertices = 0 0; 0 1; 1 0\n").starts_with(
      "line 2: key 'vertices': polygon is not strictly convex"));
  CHECK_THROWS_AS(load_domain("/nonexistent/domain.txt"), ConfigError);
}

TEST_CASE("shipped sample domains parse") {
  const std::string dir = GAUSSGAP_DATA_DIR "/domains/";
  CHECK(diameter(load_domain(dir + "square.txt")) == doctest::Approx(std::sqrt(2.0)));
  CHECK(diameter(load_domain(dir + "rectangle_3x4.txt")) == doctest::Approx(5.0));
  CHECK(diameter(load_domain(dir + "disk.txt")) == 2.0);
  CHECK(diameter(load_domain(dir + "ellipse_2x1.txt")) == 4.0);
  CHECK(diameter(load_domain(dir + "pentagon.txt")) ==
        doctest::Approx(2.0 * std::sin(2.0 * kPi / 5.0)).epsilon(1e-15));
  CHECK(diameter(load_domain(dir + "thin_rectangle.txt")) == doctest::Approx(std::sqrt(4.0004)));
}
