#pragma once

#include <string>

#include "barytope/geometry.hpp"

namespace bary {

/// Schema: {"name": string, "dim": int, "A": [[real,...],...], "b": [real,...]},
/// row-major, UTF-8. Shared by every CLI command that reads or writes bodies.
std::string polytope_to_json(const HPolytope& poly);
HPolytope polytope_from_json(const std::string& text);

void write_polytope_file(const HPolytope& poly, const std::string& path);
HPolytope read_polytope_file(const std::string& path);

} // namespace bary
