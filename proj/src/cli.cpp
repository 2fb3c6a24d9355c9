#include "gaussgap/cli.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "gaussgap/domain2d.hpp"
#include "gaussgap/domain_file.hpp"
#include "gaussgap/error.hpp"
#include "gaussgap/model1d.hpp"
#include "gaussgap/verify.hpp"

namespace gaussgap {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kThreePiSquared = 3.0 * std::numbers::pi * std::numbers::pi;

double round12(double v) {
  const std::string s = fmt::format("{:.12g}", v);
  double out = 0.0;
  std::from_chars(s.data(), s.data() + s.size(), out);
  return out;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError(fmt::format("cannot open '{}' for writing", path));
  f << text;
  if (!f.flush()) throw ConfigError(fmt::format("failed writing '{}'", path));
}

struct Settings {
  int order = 64;
  std::string out;
  std::string format;
  double lambda2_offset = 0.0;

  SolveOptions solve() const {
    SolveOptions o;
    o.order = order;
    o.max_order = std::max(1024, 2 * order);
    o.lambda2_offset = lambda2_offset;
    return o;
  }
};

Json domain_json(const DomainSpec2D& d) {
  Json j;
  const auto& s = d.shape();
  j["type"] = std::string(d.kind());
  if (const auto* r = std::get_if<Rectangle>(&s)) {
    j["w"] = r->w;
    j["h"] = r->h;
  } else if (const auto* e = std::get_if<Ellipse>(&s)) {
    j["a"] = e->a;
    j["b"] = e->b;
  } else {
    Json v = Json::array();
    for (const auto& p : std::get<ConvexPolygon>(s).vertices) v.push_back({p.x, p.y});
    j["vertices"] = v;
  }
  return j;
}

Json outcome_json(const VerificationOutcome& o) {
  Json inputs = Json::object();
  for (const auto& [k, v] : o.inputs) {
    if (const auto* d = std::get_if<double>(&v))
      inputs[k] = *d;
    else
      inputs[k] = std::get<std::string>(v);
  }
  Json measured = Json::object();
  for (const auto& [k, v] : o.measured) measured[k] = v;  // NaN becomes null
  Json j;
  j["claim_id"] = o.claim_id;
  j["inputs"] = inputs;
  j["measured"] = measured;
  j["tolerance"] = o.tolerance;
  j["verdict"] = o.pass ? "pass" : "fail";
  j["notes"] = o.notes;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

int cmd_table(const Settings& s, std::vector<double> diameters, const std::string& range,
              std::ostream& out) {
  if (!range.empty()) {
    const auto r = parse_range(range);
    diameters.insert(diameters.end(), r.begin(), r.end());
  }
  if (diameters.empty())
    for (int i = 1; i <= 10; ++i) diameters.push_back(i);
  for (double d : diameters)
    if (!(d >= 0.0)) throw ConfigError(fmt::format("diameter must be >= 0, got {}", d));

  std::string csv = "D,lambda1_scaled,lambda2_scaled,gap_normalized\n";
  Json rows = Json::array();
  for (double d : diameters) {
    const ScaledEigenvalues e = solve_scaled(d, s.solve());
    const double g = e.gap() / kThreePiSquared;
    csv += fmt::format("{},{:.6f},{:.6f},{:.6f}\n", format_label(d), e.lambda1, e.lambda2, g);
    rows.push_back(
        Json{{"D", d}, {"lambda1_scaled", e.lambda1}, {"lambda2_scaled", e.lambda2},
             {"gap_normalized", g}});
  }
  emit(s.format == "json" ? dump(rows) : csv, s.out, out);
  return kExitOk;
}

int cmd_figure(const Settings& s, const std::string& range, std::ostream& out) {
  const auto ds = parse_range(range);
  if (!(ds.front() > 0.0) || !(ds.back() > ds.front())) {
    throw ConfigError("figure range needs 0 < D_min < D_max");
  }
  std::string csv = "D,gap_normalized\n";
  Json rows = Json::array();
  for (double d : ds) {
    const double g = normalized_gap(d, s.solve()).normalized;
    csv += fmt::format("{},{:.6f}\n", format_label(d), g);
    rows.push_back(Json{{"D", d}, {"gap_normalized", g}});
  }
  emit(s.format == "json" ? dump(rows) : csv, s.out, out);
  return kExitOk;
}

int cmd_solve1d(const Settings& s, double d, const std::string& gauge_name, std::ostream& out) {
  const auto gauge = parse_gauge(gauge_name);
  if (!gauge) throw ConfigError(fmt::format("unknown gauge '{}'", gauge_name));
  const Spectrum1D spec = solve_model(d, *gauge, s.solve());
  const double normalized = spec.gap() * d * d / kThreePiSquared;
  if (s.format == "json") {
    Json j;
    j["command"] = "solve1d";
    j["diameter"] = d;
    j["gauge"] = std::string(to_string(*gauge));
    j["order"] = spec.grid.order();
    j["lambda1"] = spec.lambda1;
    j["lambda2"] = spec.lambda2;
    j["gap"] = spec.gap();
    j["gap_normalized"] = normalized;
    emit(dump(j), s.out, out);
  } else {
    emit(fmt::format("D,gauge,order,lambda1,lambda2,gap,gap_normalized\n"
                     "{},{},{},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                     format_label(d), to_string(*gauge), spec.grid.order(), spec.lambda1,
                     spec.lambda2, spec.gap(), normalized),
         s.out, out);
  }
  return kExitOk;
}

int cmd_solve2d(const Settings& s, const std::string& path, double h, std::ostream& out,
                std::ostream& err) {
  if (path.empty()) throw ConfigError("solve2d needs --domain <file>");
  if (!(h > 0.0)) throw ConfigError("grid step must be positive");
  const DomainSpec2D domain = load_domain(path);
  const GapReport r = check_gap_bound(domain, h, s.solve());
  if (s.format == "json") {
    Json j;
    j["command"] = "solve2d";
    j["domain"] = domain_json(domain);
    j["diameter"] = r.diameter;
    j["method"] = std::string(to_string(r.method));
    j["h"] = r.h;
    j["lambda1"] = r.lambda1;
    j["lambda2"] = r.lambda2;
    j["gap"] = r.gap_2d;
    j["gap_model"] = r.gap_model;
    j["margin"] = r.margin;
    j["error_estimate"] = r.error_estimate;
    j["convexity"] = r.convexity;
    j["verdict"] = r.pass ? "pass" : "fail";
    emit(dump(j), s.out, out);
  } else {
    emit(fmt::format("type,diameter,method,h,lambda1,lambda2,gap,gap_model,margin,"
                     "error_estimate,convexity,verdict\n"
                     "{},{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g},{},{}\n",
                     r.kind, r.diameter, to_string(r.method), r.h, r.lambda1, r.lambda2,
                     r.gap_2d, r.gap_model, r.margin, r.error_estimate, r.convexity,
                     r.pass ? "pass" : "fail"),
         s.out, out);
  }
  if (!r.pass) {
    err << fmt::format("gap bound check failed: margin {} below -{}\n", r.margin,
                       r.error_estimate);
    return kExitVerificationFailed;
  }
  return kExitOk;
}

int cmd_verify(const Settings& s, std::vector<std::string> suites, std::uint64_t seed,
               double h, std::ostream& out, std::ostream& err) {
  if (suites.empty()) suites.push_back("all");
  for (const auto& name : suites) {
    if (name != "all" &&
        std::find(suite_names().begin(), suite_names().end(), name) == suite_names().end()) {
      throw ConfigError(fmt::format("unknown suite '{}'; known suites: all, {}", name,
                                    fmt::join(suite_names(), ", ")));
    }
  }
  if (!(h > 0.0)) throw ConfigError("grid step must be positive");
  VerifyOptions opt;
  opt.solve = s.solve();
  opt.seed = seed;
  opt.grid_step = h;

  Json report = Json::array();
  std::vector<std::string> failed;
  for (const auto& name : suites) {
    for (const auto& o : run_suite(name, opt)) {
      report.push_back(outcome_json(o));
      if (!o.pass) failed.push_back(o.claim_id);
    }
  }
  emit(dump(report), s.out, out);
  if (!failed.empty()) {
    failed.erase(std::unique(failed.begin(), failed.end()), failed.end());
    err << fmt::format("verification failed: {}\n", fmt::join(failed, ", "));
    return kExitVerificationFailed;
  }
  return kExitOk;
}

}  // namespace

std::vector<double> parse_range(std::string_view text) {
  std::vector<double> parts;
  std::size_t start = 0;
  for (int k = 0; k < 3; ++k) {
    const auto stop = k < 2 ? text.find(':', start) : text.size();
    if (stop == std::string_view::npos) {
      throw ConfigError(fmt::format("range '{}' is not of the form a:b:s", text));
    }
    const std::string_view field = text.substr(start, stop - start);
    double v = 0.0;
    const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc() || end != field.data() + field.size() ||
        !std::isfinite(v)) {
      throw ConfigError(fmt::format("range '{}': '{}' is not a decimal number", text, field));
    }
    parts.push_back(v);
    start = stop + 1;
  }
  const double a = parts[0], b = parts[1], step = parts[2];
  if (!(step > 0.0)) throw ConfigError(fmt::format("range '{}': step must be positive", text));
  if (b < a) throw ConfigError(fmt::format("range '{}': end is below start", text));
  const double count = std::floor((b - a) / step + 1e-9) + 1.0;
  if (count > 1e6) throw ConfigError(fmt::format("range '{}' has too many points", text));
  std::vector<double> out;
  for (int i = 0; i < static_cast<int>(count); ++i) out.push_back(round12(a + i * step));
  return out;
}

std::string format_label(double value) {
  std::string s = fmt::format("{}", round12(value));
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dirichlet spectra of the Ornstein-Uhlenbeck operator and gap checks", "gaussgap"};
  // -h is the grid step
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  Settings s;
  std::vector<double> diameters;
  double diameter = 0.0;
  std::string range, gauge = "schrodinger", domain_path;
  double grid_step = 1.0 / 128;
  std::vector<std::string> suites, positional_suites;
  std::uint64_t seed = 42;

  auto common = [&](CLI::App* sub) {
    sub->add_option("-N,--order", s.order, "Chebyshev order (>= 32)")
        ->check(CLI::Range(32, 8192))
        ->capture_default_str();
    sub->add_option("--out", s.out, "Write output to this file instead of stdout");
    sub->add_option("--inject-lambda2-offset", s.lambda2_offset)->group("");
  };

  auto* table = app.add_subcommand("table", "Scaled eigenvalues and normalized gaps");
  common(table);
  table->add_option("-D,--diameter", diameters, "Diameters (default 1..10)");
  table->add_option("--range", range, "Diameters a:b:s");
  std::string table_format = "csv", figure_format = "csv", solve1d_format = "json",
              solve2d_format = "json", verify_format = "json";
  table->add_option("--format", table_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* figure = app.add_subcommand("figure", "Normalized gap sweep");
  std::string figure_range = "0.1:10:0.1";
  common(figure);
  figure->add_option("--range", figure_range, "Diameters a:b:s")->capture_default_str();
  figure->add_option("--format", figure_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* solve1d = app.add_subcommand("solve1d", "Solve the 1-D model at one diameter");
  common(solve1d);
  solve1d->add_option("-D,--diameter", diameter, "Interval length")->required();
  solve1d->add_option("--gauge", gauge, "ou or schrodinger")->capture_default_str();
  solve1d->add_option("--format", solve1d_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* solve2d = app.add_subcommand("solve2d", "Gap of a planar domain against the 1-D model");
  common(solve2d);
  solve2d->add_option("--domain", domain_path, "Domain description file")->required();
  solve2d->add_option("-h,--grid-step", grid_step, "Finite-difference step")->capture_default_str();
  solve2d->add_option("--format", solve2d_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto* verify = app.add_subcommand("verify", "Run verification suites");
  common(verify);
  verify->add_option("suites", positional_suites, "Suite names (default all)");
  verify->add_option("--suite", suites, "Suite names, comma separated")->delimiter(',');
  verify->add_option("--seed", seed, "Seed for sampled checks")->capture_default_str();
  verify->add_option("-h,--grid-step", grid_step, "Finite-difference step for 2-D checks")
      ->capture_default_str();
  verify->add_option("--format", verify_format, "json")->check(CLI::IsMember({"json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    for (auto [sub, f] : {std::pair{table, &table_format}, {figure, &figure_format},
                          {solve1d, &solve1d_format}, {solve2d, &solve2d_format},
                          {verify, &verify_format}}) {
      if (sub->parsed()) s.format = *f;
    }
    if (table->parsed()) return cmd_table(s, diameters, range, out);
    if (figure->parsed()) return cmd_figure(s, figure_range, out);
    if (solve1d->parsed()) return cmd_solve1d(s, diameter, gauge, out);
    if (solve2d->parsed()) return cmd_solve2d(s, domain_path, grid_step, out, err);
    suites.insert(suites.begin(), positional_suites.begin(), positional_suites.end());
    return cmd_verify(s, suites, seed, grid_step, out, err);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
}

}  // namespace gaussgap
