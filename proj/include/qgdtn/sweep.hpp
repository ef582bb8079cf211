#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "qgdtn/metric_graph.hpp"
#include "qgdtn/positivity.hpp"

namespace qgdtn {

struct SweepRecord {
  double lambda = 0.0;
  std::vector<double> eigenvalues;  // ascending; empty at a pole
  Verdict verdict = Verdict::Pole;
  bool near_pole = false;
  std::string error;  // non-pole failure, if any
};

/// Uniform grid lo..hi (both included) with `steps` samples. Samples are
/// evaluated on `threads` workers and returned in grid order.
std::vector<SweepRecord> sweep(const MetricGraph& g, double lo, double hi, int steps, const ClassifierConfig& cfg = {},
                               unsigned threads = 0);

SweepRecord sweep_sample(const MetricGraph& g, double lambda, const ClassifierConfig& cfg = {});

struct Band {
  double lo = 0.0;
  double hi = 0.0;
  Verdict verdict = Verdict::None;
  int samples = 0;
};

/// Merges runs of equal verdicts; pole and marginal samples end a run and are
/// not part of any band.
std::vector<Band> report(const std::vector<SweepRecord>& records);

void write_sweep_csv(std::ostream& out, const std::vector<SweepRecord>& records);
std::string bands_to_json(const std::vector<Band>& bands, int indent = 2);

// Shortest round-trip decimal form with 17 significant digits.
std::string format_double(double x);

}  // namespace qgdtn
