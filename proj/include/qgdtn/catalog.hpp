#pragma once

#include <string>
#include <vector>

#include "qgdtn/metric_graph.hpp"

namespace qgdtn {

/// Built-in example graphs: "interval" (optionally "interval:L"), "path-3",
/// "evpos-counterexample", "lasso-4", "star-5", "figure-1".
/// Throws Error(InvalidArgument) for unknown names.
MetricGraph catalog_graph(const std::string& name);
std::vector<std::string> catalog_names();

MetricGraph interval_graph(double length);

}  // namespace qgdtn
