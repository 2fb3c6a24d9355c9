#include "gaussgap/domain_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>

#include "gaussgap/error.hpp"

namespace gaussgap {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(int line, std::string_view key, const std::string& what) {
  if (line > 0) throw ConfigError(fmt::format("line {}: key '{}': {}", line, key, what));
  throw ConfigError(fmt::format("key '{}': {}", key, what));
}

double parse_number(std::string_view text, int line, std::string_view key) {
  const std::string_view t = trim(text);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || end != t.data() + t.size() || !std::isfinite(v)) {
    fail(line, key, fmt::format("'{}' is not a decimal number", t));
  }
  return v;
}

std::vector<Point2> parse_vertices(std::string_view text, int line) {
  std::vector<Point2> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto stop = std::min(text.find(';', start), text.size());
    const std::string_view pair = trim(text.substr(start, stop - start));
    start = stop + 1;
    if (pair.empty()) {
      if (stop == text.size()) break;  // allow a trailing ';'
      fail(line, "vertices", "empty vertex between ';'");
    }
    const auto space = pair.find_first_of(" \t");
    if (space == std::string_view::npos) {
      fail(line, "vertices", fmt::format("'{}' is not an 'x y' pair", pair));
    }
    const std::string_view rest = trim(pair.substr(space));
    if (rest.find_first_of(" \t") != std::string_view::npos) {
      fail(line, "vertices", fmt::format("'{}' is not an 'x y' pair", pair));
    }
    out.push_back({parse_number(pair.substr(0, space), line, "vertices"),
                   parse_number(rest, line, "vertices")});
  }
  return out;
}

}  // namespace

DomainSpec2D parse_domain(std::string_view text) {
  std::map<std::string, Entry, std::less<>> entries;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(fmt::format("line {}: expected 'key = value', got '{}'", line_no, line));
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string_view value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(fmt::format("line {}: missing key before '='", line_no));
    if (value.empty()) fail(line_no, key, "missing value");
    if (const auto it = entries.find(key); it != entries.end()) {
      fail(line_no, key, fmt::format("duplicate (first set on line {})", it->second.line));
    }
    entries.emplace(key, Entry{std::string(value), line_no});
  }

  const auto type_it = entries.find("type");
  if (type_it == entries.end()) fail(0, "type", "required key is missing");
  const std::string type = type_it->second.value;

  std::vector<std::string> allowed;
  if (type == "rectangle") {
    allowed = {"w", "h"};
  } else if (type == "ellipse") {
    allowed = {"a", "b"};
  } else if (type == "polygon") {
    allowed = {"vertices"};
  } else {
    fail(type_it->second.line, "type",
         fmt::format("unknown domain type '{}' (rectangle, ellipse, polygon)", type));
  }
  for (const auto& [key, entry] : entries) {
    if (key == "type") continue;
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(entry.line, key, fmt::format("not a field of type '{}'", type));
    }
  }
  for (const auto& key : allowed) {
    if (!entries.count(key)) fail(0, key, fmt::format("required for type '{}'", type));
  }

  auto number = [&](const std::string& key) {
    const Entry& e = entries.at(key);
    return parse_number(e.value, e.line, key);
  };
  // re-raise shape validation with the key that caused it
  auto build = [&](auto&& make, const std::string& key) {
    try {
      return make();
    } catch (const DomainError& e) {
      fail(entries.at(key).line, key, e.what());
    }
  };
  if (type == "rectangle") {
    const double w = number("w"), h = number("h");
    if (!(w > 0.0)) fail(entries.at("w").line, "w", "must be positive");
    if (!(h > 0.0)) fail(entries.at("h").line, "h", "must be positive");
    return DomainSpec2D::rectangle(w, h);
  }
  if (type == "ellipse") {
    const double a = number("a"), b = number("b");
    if (!(a > 0.0)) fail(entries.at("a").line, "a", "must be positive");
    if (!(b > 0.0)) fail(entries.at("b").line, "b", "must be positive");
    return DomainSpec2D::ellipse(a, b);
  }
  const Entry& v = entries.at("vertices");
  auto vertices = parse_vertices(v.value, v.line);
  return build([&] { return DomainSpec2D::polygon(std::move(vertices)); }, "vertices");
}

DomainSpec2D load_domain(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(fmt::format("cannot read domain file '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_domain(buf.str());
  } catch (const ConfigError& e) {
    throw ConfigError(fmt::format("{}: {}", path, e.what()));
  }
}

std::string format_domain(const DomainSpec2D& domain) {
  const auto& s = domain.shape();
  if (const auto* r = std::get_if<Rectangle>(&s)) {
    return fmt::format("type = rectangle\nw = {:.17g}\nh = {:.17g}\n", r->w, r->h);
  }
  if (const auto* e = std::get_if<Ellipse>(&s)) {
    return fmt::format("type = ellipse\na = {:.17g}\nb = {:.17g}\n", e->a, e->b);
  }
  std::string out = "type = polygon\nvertices =";
  const auto& v = std::get<ConvexPolygon>(s).vertices;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out += fmt::format("{} {:.17g} {:.17g}", i ? ";" : "", v[i].x, v[i].y);
  }
  return out + "\n";
}

}  // namespace gaussgap
