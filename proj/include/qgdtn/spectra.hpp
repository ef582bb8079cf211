#pragma once

#include <string>
#include <vector>

#include "qgdtn/metric_graph.hpp"

namespace qgdtn {

enum class SpectrumKind { ClosedForm, Discretized };

struct SpectrumList {
  std::vector<double> values;          // ascending, distinct
  std::vector<int> multiplicity;       // same length as values
  SpectrumKind kind = SpectrumKind::ClosedForm;
  int resolution = 0;                  // elements per unit length, discretized only
};

std::string to_string(SpectrumKind kind);

/// sigma(-Delta_V) = {(pi k / L_e)^2} up to lambda_max, sorted, coinciding
/// values (relative 1e-12) merged with multiplicity.
SpectrumList dirichlet_spectrum_full(const MetricGraph& g, double lambda_max);

/// Lowest `count` eigenvalues of -Delta with Dirichlet conditions on outer
/// vertices and Kirchhoff conditions on inner ones, by P1 finite elements
/// with max(2, ceil(resolution * L_e)) elements per edge. Throws
/// ResolutionTooLow if the Richardson error estimate of the lowest value
/// exceeds 1% of it.
SpectrumList kirchhoff_spectrum(const MetricGraph& g, int count, int resolution);

// FEM eigenvalues without the error check; used for convergence studies.
std::vector<double> fem_eigenvalues(const MetricGraph& g, int count, int resolution);

/// Best available lambda_1(-Delta_{V_outer}): closed form when every vertex
/// is outer, else the Richardson-extrapolated FEM value.
double lambda1_outer(const MetricGraph& g, int resolution = 32);

struct PoleEstimate {
  double lambda = 0.0;
  double width = 0.0;  // final bracket width
};

/// Locates poles of lambda -> D_{lambda,V_outer} in (lo, hi). Between poles the
/// sorted eigenvalues of D are non-increasing, so a sample interval on which
/// some sorted eigenvalue increases contains a pole; it is bisected to width
/// 1e-10 * max(1, lambda).
std::vector<PoleEstimate> pole_scan(const MetricGraph& g, double lo, double hi, int samples);

}  // namespace qgdtn
