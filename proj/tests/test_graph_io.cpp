#include "catch_amalgamated.hpp"

#include <cmath>

#include "qgdtn/catalog.hpp"
#include "qgdtn/error.hpp"
#include "qgdtn/graph_io.hpp"

using namespace qgdtn;
using Catch::Matchers::WithinRel;

TEST_CASE("parse a plain graph description") {
  const RawGraph raw = parse_graph_json(R"({"vertices": ["a", "b", "c"],
    "edges": [{"u": "a", "v": "b", "length": 1.5}, {"u": "b", "v": "c", "length": 2}],
    "outer": ["a", "c"]})");
  REQUIRE(raw.edges.size() == 2);
  CHECK(raw.edges[0].length == 1.5);
  CHECK(raw.edges[1].u == "b");
  CHECK(raw.outer == std::vector<std::string>{"a", "c"});
  const MetricGraph g = validate(raw);
  CHECK(g.names() == std::vector<std::string>{"a", "c", "b"});
}

TEST_CASE("integer vertex ids are accepted") {
  const RawGraph raw = parse_graph_json(R"({"vertices": [1, 2], "edges": [{"u": 1, "v": 2, "length": 1}], "outer": [1]})");
  CHECK(raw.vertices == std::vector<std::string>{"1", "2"});
  CHECK_NOTHROW(validate(raw));
}

TEST_CASE("length expressions") {
  CHECK(parse_length_expr("sqrt(17)") == std::sqrt(17.0));
  CHECK_THAT(parse_length_expr("3*sqrt(5)"), WithinRel(3 * std::sqrt(5.0), 1e-15));
  CHECK_THAT(parse_length_expr("1/3*sqrt(2)"), WithinRel(std::sqrt(2.0) / 3, 1e-15));
  CHECK(parse_length_expr("7") == 7.0);
  CHECK(parse_length_expr("3/4") == 0.75);
  CHECK_THROWS_AS(parse_length_expr("sqrt(-2)"), Error);
  CHECK_THROWS_AS(parse_length_expr("pi"), Error);

  const RawGraph raw = parse_graph_json(R"j({"vertices": ["a", "b"],
    "edges": [{"u": "a", "v": "b", "length": 4.1, "length_expr": "sqrt(17)"}], "outer": ["a"]})j");
  CHECK(raw.edges[0].length == std::sqrt(17.0));
}

TEST_CASE("malformed input raises ParseError") {
  auto code = [](const char* text) {
    try {
      parse_graph_json(text);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::InvalidArgument;
  };
  CHECK(code("{") == ErrorCode::ParseError);
  CHECK(code(R"({"vertices": ["a"]})") == ErrorCode::ParseError);
  CHECK(code(R"({"vertices": ["a", "b"], "edges": [{"u": "a", "v": "b"}], "outer": ["a"]})") == ErrorCode::ParseError);
  CHECK_THROWS_AS(load_graph_file("/nonexistent/graph.json"), Error);
}

TEST_CASE("round trip through JSON preserves the graph") {
  for (const auto& name : catalog_names()) {
    const MetricGraph g = catalog_graph(name);
    const MetricGraph h = validate(parse_graph_json(graph_to_json(g)));
    CHECK(h.names() == g.names());
    REQUIRE(h.edges().size() == g.edges().size());
    for (std::size_t e = 0; e < g.edges().size(); ++e) {
      CHECK(h.edges()[e].u == g.edges()[e].u);
      CHECK(h.edges()[e].v == g.edges()[e].v);
      CHECK(h.edges()[e].length == g.edges()[e].length);
    }
  }
}
