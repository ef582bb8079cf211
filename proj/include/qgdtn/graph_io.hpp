#pragma once

#include <string>

#include "qgdtn/metric_graph.hpp"

namespace qgdtn {

/// Parses the JSON graph description
///   {"vertices": [...], "edges": [{"u":..,"v":..,"length":..}], "outer": [...]}
/// An edge may give "length_expr" ("a*sqrt(p)", "sqrt(p)", "a", with a an
/// integer or fraction) instead of, or in addition to, "length"; the expression
/// wins. Throws Error(ParseError) on malformed input. No validation is done.
RawGraph parse_graph_json(const std::string& text);
RawGraph load_graph_file(const std::string& path);

// Evaluates a length expression in extended precision.
double parse_length_expr(const std::string& expr);

std::string graph_to_json(const MetricGraph& g, int indent = 2);

}  // namespace qgdtn
