#include "qgdtn/catalog.hpp"

#include <cmath>

#include "qgdtn/error.hpp"

namespace qgdtn {

namespace {

double root(int p) { return static_cast<double>(std::sqrt(static_cast<long double>(p))); }

RawGraph make(std::vector<std::string> vertices, std::vector<RawEdge> edges, std::vector<std::string> outer) {
  return RawGraph{std::move(vertices), std::move(edges), std::move(outer)};
}

}  // namespace

MetricGraph interval_graph(double length) { return validate(make({"v1", "v2"}, {{"v1", "v2", length}}, {"v1", "v2"})); }

std::vector<std::string> catalog_names() {
  return {"interval", "path-3", "evpos-counterexample", "lasso-4", "star-5", "figure-1"};
}

MetricGraph catalog_graph(const std::string& name) {
  if (name == "interval") return interval_graph(1.0);
  if (name.rfind("interval:", 0) == 0) {
    try {
      return interval_graph(std::stod(name.substr(9)));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::InvalidArgument, "bad interval length in '" + name + "'");
    }
  }
  if (name == "path-3")
    return validate(make({"v1", "v2", "v3"}, {{"v1", "v2", 1.0}, {"v2", "v3", root(17)}}, {"v1", "v2"}));
  if (name == "evpos-counterexample")
    return validate(make({"v1", "v2", "v3", "v4", "v5"},
                         {{"v1", "v2", 1.0}, {"v2", "v3", root(2)}, {"v1", "v4", root(3)}, {"v2", "v4", root(5)}, {"v4", "v5", root(7)}},
                         {"v1", "v2", "v3"}));
  if (name == "lasso-4")
    return validate(make({"v1", "v2", "v3", "v4"},
                         {{"v1", "v4", 1.0}, {"v2", "v4", root(3)}, {"v3", "v4", root(5)}, {"v2", "v3", root(7)}},
                         {"v1", "v2", "v3"}));
  if (name == "star-5")
    return validate(make({"v1", "v2", "v3", "v4", "v5", "v6"},
                         {{"v1", "v6", 1.0}, {"v2", "v6", root(2)}, {"v3", "v6", root(3)}, {"v4", "v6", root(5)}, {"v5", "v6", root(7)}},
                         {"v1", "v2", "v3", "v4", "v5"}));
  if (name == "figure-1") {
    const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
    const std::pair<const char*, const char*> pairs[] = {
        {"v1", "v2"}, {"v1", "v8"},   {"v2", "v8"},  {"v8", "v9"},   {"v9", "v10"}, {"v9", "v3"}, {"v3", "v4"},
        {"v4", "v5"}, {"v5", "v11"}, {"v11", "v12"}, {"v4", "v11"}, {"v12", "v6"}, {"v6", "v7"}};
    std::vector<RawEdge> edges;
    for (int i = 0; i < 13; ++i) edges.push_back({pairs[i].first, pairs[i].second, root(primes[i])});
    return validate(make({"v1", "v2", "v3", "v4", "v5", "v6", "v7", "v8", "v9", "v10", "v11", "v12"}, edges,
                         {"v1", "v2", "v3", "v4", "v5", "v6", "v7"}));
  }
  throw Error(ErrorCode::InvalidArgument, "unknown catalog graph '" + name + "'");
}

}  // namespace qgdtn
