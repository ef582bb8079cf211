#include "qgdtn/dtn.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qgdtn/error.hpp"

namespace qgdtn {

namespace {

using EIdx = Eigen::Index;

std::string edge_label(const MetricGraph& g, const Edge& e) {
  return "edge (" + g.names()[e.u] + ", " + g.names()[e.v] + ")";
}

}  // namespace

double pole_tolerance(double phase) {
  return std::max(kPoleTolerance, 64 * std::numeric_limits<double>::epsilon() * std::abs(phase));
}

bool is_edge_pole(double lambda, double length) {
  if (lambda <= 0.0) return false;
  const double s = std::sqrt(lambda) * length;
  return std::abs(std::sin(s)) < pole_tolerance(s);
}

EdgeCoefficients edge_coefficients(double lambda, double length) {
  EdgeCoefficients c;
  const double z = lambda * length * length;
  if (std::abs(z) < kSeriesThreshold) {
    // s/sin s and s cot s about s = 0, in z = s^2.
    c.beta = (1.0 + z * (1.0 / 6.0 + z * (7.0 / 360.0 + z * (31.0 / 15120.0)))) / length;
    c.alpha = (1.0 - z * (1.0 / 3.0 + z * (1.0 / 45.0 + z * (2.0 / 945.0)))) / length;
    return c;
  }
  if (lambda < 0.0) {
    const double k = std::sqrt(-lambda);
    const double x = k * length;
    c.alpha = k / std::tanh(x);
    c.beta = std::max(k / std::sinh(x), std::numeric_limits<double>::min());
    return c;
  }
  const double r = std::sqrt(lambda);
  const double s = r * length;
  const double sn = std::sin(s);
  c.at_pole = std::abs(sn) < pole_tolerance(s);
  c.alpha = r * std::cos(s) / sn;
  c.beta = r / sn;
  return c;
}

EdgeCoefficients edge_alpha_beta(double lambda, double length) {
  if (!(length > 0.0)) throw Error(ErrorCode::NonPositiveLength, "length " + std::to_string(length));
  EdgeCoefficients c = edge_coefficients(lambda, length);
  if (c.at_pole)
    throw Error(ErrorCode::AtPole, "lambda=" + std::to_string(lambda) + " is a Dirichlet eigenvalue of an edge of length " +
                                       std::to_string(length));
  return c;
}

DtnMatrix assemble_full(const MetricGraph& g, double lambda) {
  const auto n = static_cast<EIdx>(g.vertex_count());
  DtnMatrix d;
  d.lambda = lambda;
  d.entries = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    EdgeCoefficients c = edge_coefficients(lambda, e.length);
    if (c.at_pole) throw Error(ErrorCode::AtPole, edge_label(g, e) + " at lambda=" + std::to_string(lambda));
    const auto u = static_cast<EIdx>(e.u), v = static_cast<EIdx>(e.v);
    d.entries(u, v) = -c.beta;
    d.entries(v, u) = -c.beta;
    d.entries(u, u) += c.alpha;
    d.entries(v, v) += c.alpha;
  }
  return d;
}

namespace {

// X = S^{-1} R via a symmetric eigendecomposition of S, with a condition check.
Eigen::MatrixXd symmetric_solve(const Eigen::MatrixXd& S, const Eigen::MatrixXd& R, double lambda) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S);
  const Eigen::VectorXd& ev = es.eigenvalues();
  const double big = std::max(ev.cwiseAbs().maxCoeff(), R.cwiseAbs().maxCoeff());
  const double small = ev.cwiseAbs().minCoeff();
  if (!(small > 0.0) || big / small > kMaxInnerCondition)
    throw Error(ErrorCode::InnerBlockSingular,
                "inner block condition " + std::to_string(small > 0 ? big / small : INFINITY) + " at lambda=" +
                    std::to_string(lambda));
  const Eigen::MatrixXd& V = es.eigenvectors();
  return V * ev.cwiseInverse().asDiagonal() * (V.transpose() * R);
}

}  // namespace

DtnMatrix schur_reduce(const DtnMatrix& full, EIdx m) {
  const EIdx n = full.dim();
  if (m < 1 || m > n) throw Error(ErrorCode::InvalidArgument, "outer block size out of range");
  DtnMatrix out;
  out.lambda = full.lambda;
  if (m == n) {
    out = full;
    return out;
  }
  const EIdx k = n - m;
  const Eigen::MatrixXd X = symmetric_solve(full.entries.bottomRightCorner(k, k), full.entries.bottomLeftCorner(k, m), full.lambda);
  Eigen::MatrixXd s = full.entries.topLeftCorner(m, m) - full.entries.topRightCorner(m, k) * X;
  out.entries = 0.5 * (s + s.transpose());
  out.provenance = Provenance::Schur;
  out.eliminated = static_cast<std::size_t>(k);
  return out;
}

DtnMatrix assemble_outer(const MetricGraph& g, double lambda) {
  DtnMatrix full = assemble_full(g, lambda);
  const auto m = static_cast<EIdx>(g.outer_count());
  if (g.inner_count() == 0) return full;

  Eigen::MatrixXd s = full.entries.topLeftCorner(m, m);
  for (const auto& comp : g.inner_components()) {
    const auto k = static_cast<EIdx>(comp.size());
    Eigen::MatrixXd cc(k, k), ca(k, m);
    for (EIdx a = 0; a < k; ++a) {
      const auto ia = static_cast<EIdx>(comp[static_cast<std::size_t>(a)]);
      for (EIdx b = 0; b < k; ++b) cc(a, b) = full.entries(ia, static_cast<EIdx>(comp[static_cast<std::size_t>(b)]));
      ca.row(a) = full.entries.row(ia).head(m);
    }
    s -= ca.transpose() * symmetric_solve(cc, ca, lambda);
  }

  DtnMatrix out;
  out.lambda = lambda;
  out.entries = 0.5 * (s + s.transpose());
  out.provenance = Provenance::Schur;
  out.eliminated = g.inner_count();

  const AdjacencyPattern pattern = adjacency_pattern(reduced_graph(g));
  const double scale = out.entries.cwiseAbs().maxCoeff();
  for (EIdx r = 0; r < m; ++r)
    for (EIdx c = 0; c < m; ++c)
      if (r != c && !pattern.allows(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) &&
          std::abs(out.entries(r, c)) > 1e-12 * scale)
        throw Error(ErrorCode::PatternViolation,
                    "entry (" + g.names()[static_cast<std::size_t>(r)] + ", " + g.names()[static_cast<std::size_t>(c)] +
                        ") is nonzero outside the reduced graph");
  return out;
}

double pole_residue_exact(double length, int k) {
  const double w = std::numbers::pi * k / length;
  return 2.0 * (k % 2 == 0 ? 1.0 : -1.0) * w * w / length;
}

double pole_residue_probe(const MetricGraph& g, int k, std::size_t edge) {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "pole index must be >= 1");
  if (edge >= g.edges().size()) throw Error(ErrorCode::InvalidArgument, "edge index out of range");
  const double L = g.edges()[edge].length;
  const double star = std::pow(std::numbers::pi * k / L, 2);
  const double h = 1e-3 * star;

  for (std::size_t f = 0; f < g.edges().size(); ++f) {
    const double Lf = g.edges()[f].length;
    const double j0 = std::sqrt(star) * Lf / std::numbers::pi;
    for (double j = std::max(1.0, std::floor(j0) - 1); j <= std::floor(j0) + 2; ++j) {
      if (f == edge && static_cast<int>(j) == k) continue;
      const double other = std::pow(std::numbers::pi * j / Lf, 2);
      if (std::abs(other - star) < 4.0 * h)
        throw Error(ErrorCode::PoleCluster, "another pole at lambda=" + std::to_string(other) + " within the probe window");
    }
  }

  auto sym = [&](double d) {
    const double up = d * edge_coefficients(star + d, L).beta;
    const double down = -d * edge_coefficients(star - d, L).beta;
    return 0.5 * (up + down);
  };
  // Even in d, so extrapolate in d^2 twice.
  const double g1 = sym(h), g2 = sym(h / 2), g3 = sym(h / 4);
  const double r1 = (4 * g2 - g1) / 3, r2 = (4 * g3 - g2) / 3;
  return (16 * r2 - r1) / 15;
}

}  // namespace qgdtn
