#pragma once

#include <Eigen/Dense>

#include <cstddef>

#include "qgdtn/metric_graph.hpp"

namespace qgdtn {

struct EdgeCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
  bool at_pole = false;
};

// |sin(s)| below max(kPoleTolerance, 64 eps s) counts as a pole, s = sqrt(lambda) L.
inline constexpr double kPoleTolerance = 1e-12;
double pole_tolerance(double phase);
// Below |lambda| L^2 < kSeriesThreshold the Taylor expansions about 0 are used.
inline constexpr double kSeriesThreshold = 1e-8;
// Inner blocks with a larger condition number are treated as singular.
inline constexpr double kMaxInnerCondition = 1e12;

/// alpha = sqrt(l) cos(sqrt(l) L) / sin(sqrt(l) L), beta = sqrt(l) / sin(sqrt(l) L),
/// continued analytically to lambda <= 0. Never throws; at a pole the values
/// are unspecified and at_pole is set.
EdgeCoefficients edge_coefficients(double lambda, double length);

// Same as edge_coefficients but throws Error(AtPole) at a pole.
EdgeCoefficients edge_alpha_beta(double lambda, double length);

bool is_edge_pole(double lambda, double length);

enum class Provenance { Direct, Schur };

struct DtnMatrix {
  double lambda = 0.0;
  Eigen::MatrixXd entries;
  Provenance provenance = Provenance::Direct;
  std::size_t eliminated = 0;  // number of inner vertices removed by the Schur step

  Eigen::Index dim() const { return entries.rows(); }
};

/// D_{lambda,V}: every vertex Dirichlet, canonical vertex order.
DtnMatrix assemble_full(const MetricGraph& g, double lambda);

/// Schur complement onto the leading m x m block. Inner indices are taken as a
/// single block.
DtnMatrix schur_reduce(const DtnMatrix& full, Eigen::Index m);

/// D_{lambda,V_outer}. Eliminates each inner component separately so entries
/// between outer vertices that share no edge or inner component are exactly 0,
/// then checks the zero pattern against the reduced graph.
DtnMatrix assemble_outer(const MetricGraph& g, double lambda);

/// Estimates lim (lambda - lambda*) beta_e(lambda) at lambda* = (pi k / L_e)^2
/// by two-sided Richardson extrapolation.
double pole_residue_probe(const MetricGraph& g, int k, std::size_t edge);

// Exact value of the same limit, 2 (-1)^k (pi k / L)^2 / L.
double pole_residue_exact(double length, int k);

}  // namespace qgdtn
