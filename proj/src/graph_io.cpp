#include "qgdtn/graph_io.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <regex>
#include <sstream>

#include "qgdtn/error.hpp"

namespace qgdtn {

using nlohmann::json;

namespace {

long double parse_rational(const std::string& s, const std::string& whole) {
  static const std::regex rat(R"(^\s*([+-]?\d+(?:\.\d+)?)\s*(?:/\s*(\d+(?:\.\d+)?))?\s*$)");
  std::smatch m;
  if (!std::regex_match(s, m, rat)) throw Error(ErrorCode::ParseError, "bad coefficient in length_expr '" + whole + "'");
  long double num = std::stold(m[1].str());
  long double den = m[2].matched ? std::stold(m[2].str()) : 1.0L;
  if (den == 0.0L) throw Error(ErrorCode::ParseError, "zero denominator in length_expr '" + whole + "'");
  return num / den;
}

std::string vertex_name(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw Error(ErrorCode::ParseError, "vertex identifiers must be strings or integers");
}

}  // namespace

double parse_length_expr(const std::string& expr) {
  static const std::regex form(R"(^\s*(?:(.*?)\s*\*\s*)?sqrt\s*\(\s*(\d+)\s*\)\s*$)");
  std::smatch m;
  if (std::regex_match(expr, m, form)) {
    long double a = m[1].matched && !m[1].str().empty() ? parse_rational(m[1].str(), expr) : 1.0L;
    long double p = std::stold(m[2].str());
    if (p <= 0) throw Error(ErrorCode::ParseError, "sqrt argument must be positive in '" + expr + "'");
    return static_cast<double>(a * std::sqrt(p));
  }
  return static_cast<double>(parse_rational(expr, expr));
}

RawGraph parse_graph_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "top level must be an object");
  for (const char* key : {"vertices", "edges", "outer"})
    if (!doc.contains(key) || !doc[key].is_array())
      throw Error(ErrorCode::ParseError, std::string("missing array '") + key + "'");

  RawGraph raw;
  for (const auto& v : doc["vertices"]) raw.vertices.push_back(vertex_name(v));
  for (const auto& v : doc["outer"]) raw.outer.push_back(vertex_name(v));
  for (const auto& e : doc["edges"]) {
    if (!e.is_object() || !e.contains("u") || !e.contains("v"))
      throw Error(ErrorCode::ParseError, "edge entries need 'u' and 'v'");
    RawEdge edge{vertex_name(e["u"]), vertex_name(e["v"]), 0.0};
    if (e.contains("length_expr")) {
      if (!e["length_expr"].is_string()) throw Error(ErrorCode::ParseError, "length_expr must be a string");
      edge.length = parse_length_expr(e["length_expr"].get<std::string>());
    } else if (e.contains("length") && e["length"].is_number()) {
      edge.length = e["length"].get<double>();
    } else {
      throw Error(ErrorCode::ParseError, "edge (" + edge.u + ", " + edge.v + ") has no numeric length");
    }
    raw.edges.push_back(std::move(edge));
  }
  return raw;
}

RawGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_graph_json(buf.str());
}

std::string graph_to_json(const MetricGraph& g, int indent) {
  json doc;
  doc["vertices"] = g.names();
  doc["outer"] = std::vector<std::string>(g.names().begin(), g.names().begin() + static_cast<std::ptrdiff_t>(g.outer_count()));
  doc["edges"] = json::array();
  for (const auto& e : g.edges())
    doc["edges"].push_back({{"u", g.names()[e.u]}, {"v", g.names()[e.v]}, {"length", e.length}});
  return doc.dump(indent);
}

}  // namespace qgdtn
