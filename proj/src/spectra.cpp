#include "qgdtn/spectra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "qgdtn/dtn.hpp"
#include "qgdtn/error.hpp"

namespace qgdtn {

std::string to_string(SpectrumKind kind) { return kind == SpectrumKind::ClosedForm ? "closed-form" : "discretized"; }

SpectrumList dirichlet_spectrum_full(const MetricGraph& g, double lambda_max) {
  if (!(lambda_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "lambda_max must be positive");
  std::vector<double> all;
  for (const auto& e : g.edges()) {
    for (int k = 1;; ++k) {
      const double v = std::pow(std::numbers::pi * k / e.length, 2);
      if (v > lambda_max) break;
      all.push_back(v);
    }
  }
  std::sort(all.begin(), all.end());
  SpectrumList out;
  out.kind = SpectrumKind::ClosedForm;
  for (double v : all) {
    if (!out.values.empty() && std::abs(v - out.values.back()) <= 1e-12 * v) {
      ++out.multiplicity.back();
    } else {
      out.values.push_back(v);
      out.multiplicity.push_back(1);
    }
  }
  return out;
}

std::vector<double> fem_eigenvalues(const MetricGraph& g, int count, int resolution) {
  const std::size_t m = g.outer_count();
  // Inner vertices occupy the first DOFs, then interior nodes edge by edge.
  std::size_t ndof = g.inner_count();
  std::vector<int> elems;
  for (const auto& e : g.edges()) {
    int ne = std::max(2, static_cast<int>(std::ceil(resolution * e.length - 1e-9)));
    elems.push_back(ne);
    ndof += static_cast<std::size_t>(ne - 1);
  }
  const auto N = static_cast<Eigen::Index>(ndof);
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N, N), M = Eigen::MatrixXd::Zero(N, N);
  const Eigen::Index none = -1;
  auto vertex_dof = [&](Index v) { return v < m ? none : static_cast<Eigen::Index>(v - m); };

  Eigen::Index next = static_cast<Eigen::Index>(g.inner_count());
  for (std::size_t k = 0; k < g.edges().size(); ++k) {
    const auto& e = g.edges()[k];
    const int ne = elems[k];
    const double h = e.length / ne;
    const Eigen::Index first = next;
    next += ne - 1;
    for (int j = 0; j < ne; ++j) {
      Eigen::Index a = j == 0 ? vertex_dof(e.u) : first + j - 1;
      Eigen::Index b = j == ne - 1 ? vertex_dof(e.v) : first + j;
      const Eigen::Index ids[2] = {a, b};
      for (int p = 0; p < 2; ++p) {
        if (ids[p] == none) continue;
        for (int q = 0; q < 2; ++q) {
          if (ids[q] == none) continue;
          K(ids[p], ids[q]) += (p == q ? 1.0 : -1.0) / h;
          M(ids[p], ids[q]) += h * (p == q ? 2.0 : 1.0) / 6.0;
        }
      }
    }
  }
  if (N == 0) return {};
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(K, M, Eigen::EigenvaluesOnly);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(count, N); ++i) out.push_back(es.eigenvalues()(i));
  return out;
}

SpectrumList kirchhoff_spectrum(const MetricGraph& g, int count, int resolution) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be >= 1");
  if (resolution < 8) throw Error(ErrorCode::InvalidArgument, "resolution must be >= 8 elements per unit length");
  std::vector<double> fine = fem_eigenvalues(g, count, resolution);
  std::vector<double> coarse = fem_eigenvalues(g, 1, resolution / 2);
  if (!fine.empty() && !coarse.empty()) {
    const double err = std::abs(coarse[0] - fine[0]) / 3.0;
    if (err > 0.01 * fine[0])
      throw Error(ErrorCode::ResolutionTooLow, "estimated error " + std::to_string(err) + " on lambda_1=" + std::to_string(fine[0]));
  }
  SpectrumList out;
  out.kind = SpectrumKind::Discretized;
  out.resolution = resolution;
  out.values = std::move(fine);
  out.multiplicity.assign(out.values.size(), 1);
  return out;
}

double lambda1_outer(const MetricGraph& g, int resolution) {
  if (g.inner_count() == 0) {
    double longest = 0.0;
    for (const auto& e : g.edges()) longest = std::max(longest, e.length);
    return std::pow(std::numbers::pi / longest, 2);
  }
  const double fine = fem_eigenvalues(g, 1, resolution).at(0);
  const double coarse = fem_eigenvalues(g, 1, resolution / 2).at(0);
  return (4.0 * fine - coarse) / 3.0;
}

namespace {

// Sorted eigenvalues of D_{lambda,V_outer}, or nothing at a pole.
std::optional<Eigen::VectorXd> dtn_eigenvalues(const MetricGraph& g, double lambda) {
  try {
    DtnMatrix d = assemble_outer(g, lambda);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d.entries, Eigen::EigenvaluesOnly);
    return es.eigenvalues();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::AtPole || e.code() == ErrorCode::InnerBlockSingular) return std::nullopt;
    throw;
  }
}

bool increases(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i)
    if (b(i) > a(i)) return true;
  return false;
}

}  // namespace

std::vector<PoleEstimate> pole_scan(const MetricGraph& g, double lo, double hi, int samples) {
  if (samples < 2) throw Error(ErrorCode::InvalidArgument, "samples must be >= 2");
  if (!(lo < hi)) throw Error(ErrorCode::InvalidArgument, "empty lambda range");
  std::vector<PoleEstimate> poles;
  auto add = [&](double lambda, double width) {
    if (!poles.empty() && std::abs(poles.back().lambda - lambda) <= 1e-9 * std::max(1.0, lambda)) return;
    poles.push_back({lambda, width});
  };

  const double step = (hi - lo) / (samples - 1);
  std::optional<Eigen::VectorXd> prev;
  double prev_x = lo;
  for (int i = 0; i < samples; ++i) {
    const double x = i == samples - 1 ? hi : lo + step * i;
    auto cur = dtn_eigenvalues(g, x);
    if (!cur) {
      if (x > lo && x < hi) add(x, 0.0);
      prev.reset();
      prev_x = x;
      continue;
    }
    if (prev && increases(*prev, *cur)) {
      double a = prev_x, b = x;
      Eigen::VectorXd ea = *prev;
      bool exact = false;
      while (b - a > 1e-10 * std::max(1.0, std::abs(a))) {
        const double mid = 0.5 * (a + b);
        if (mid <= a || mid >= b) break;
        auto em = dtn_eigenvalues(g, mid);
        if (!em) {
          add(mid, 0.0);
          exact = true;
          break;
        }
        if (increases(ea, *em)) {
          b = mid;
        } else {
          a = mid;
          ea = *em;
        }
      }
      if (!exact) add(0.5 * (a + b), b - a);
    }
    prev = cur;
    prev_x = x;
  }
  return poles;
}

}  // namespace qgdtn
