#pragma once

// Plain-text domain descriptions, one `key = value` per line:
//
//   # 3 x 4 rectangle centred at the origin
//   type = rectangle
//   w = 3
//   h = 4
//
// type is rectangle (w, h), ellipse (a, b) or polygon (vertices). Vertices
// are "x y" pairs separated by ';', counterclockwise. '#' starts a comment;
// blank lines are ignored; each key may appear once. Errors are ConfigError
// with the line number and the offending key.

#include <string>
#include <string_view>

#include "gaussgap/domain2d.hpp"

namespace gaussgap {

DomainSpec2D parse_domain(std::string_view text);

/// Reads and parses a file; unreadable files are ConfigError too.
DomainSpec2D load_domain(const std::string& path);

/// Inverse of parse_domain (17 significant digits, round-trips exactly).
std::string format_domain(const DomainSpec2D& domain);

}  // namespace gaussgap
