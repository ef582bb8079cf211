#include "qgdtn/positivity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "qgdtn/error.hpp"
#include "qgdtn/matrix_exp.hpp"

namespace qgdtn {

using Eigen::Index;
using Eigen::MatrixXd;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Strong: return "strong";
    case Verdict::Positive: return "positive";
    case Verdict::Eventual: return "eventual";
    case Verdict::None: return "none";
    case Verdict::Marginal: return "marginal";
    case Verdict::Pole: return "pole";
  }
  return "none";
}

Verdict verdict_from_string(const std::string& s) {
  for (Verdict v : {Verdict::Strong, Verdict::Positive, Verdict::Eventual, Verdict::None, Verdict::Marginal, Verdict::Pole})
    if (to_string(v) == s) return v;
  throw Error(ErrorCode::InvalidArgument, "unknown verdict '" + s + "'");
}

std::string to_string(OracleClass c) {
  switch (c) {
    case OracleClass::AllStrict: return "all-strict";
    case OracleClass::AllNonneg: return "all-nonnegative";
    case OracleClass::EventuallyStrict: return "eventually-strict";
    case OracleClass::NotPositiveAtHorizon: return "not-positive-at-horizon";
  }
  return "";
}

namespace {

double entry_scale(const MatrixXd& M) {
  const double s = M.size() ? M.cwiseAbs().maxCoeff() : 0.0;
  return s > 0.0 ? s : 1.0;
}

double min_off_diagonal(const MatrixXd& A) {
  double m = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < A.rows(); ++i)
    for (Index j = 0; j < A.cols(); ++j)
      if (i != j) m = std::min(m, A(i, j));
  return m;
}

void check_square_finite(const MatrixXd& M) {
  if (M.rows() != M.cols() || M.rows() == 0) throw Error(ErrorCode::InvalidArgument, "matrix must be square and non-empty");
  if (!M.allFinite()) throw Error(ErrorCode::InvalidArgument, "matrix has non-finite entries");
}

}  // namespace

MetzlerCheck is_metzler(const MatrixXd& negM, const ClassifierConfig& cfg) {
  MetzlerCheck r;
  r.margin = negM.rows() > 1 ? min_off_diagonal(negM) : 0.0;
  r.metzler = r.margin >= -cfg.sign_tolerance * entry_scale(negM);
  return r;
}

bool is_irreducible(const MatrixXd& M, const ClassifierConfig&) {
  const Index n = M.rows();
  if (n <= 1) return true;
  auto reach_all = [&](bool transpose) {
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::vector<Index> stack{0};
    seen[0] = true;
    Index count = 1;
    while (!stack.empty()) {
      Index i = stack.back();
      stack.pop_back();
      for (Index j = 0; j < n; ++j) {
        const double x = transpose ? M(j, i) : M(i, j);
        if (j != i && !seen[static_cast<std::size_t>(j)] && x != 0.0) {
          seen[static_cast<std::size_t>(j)] = true;
          ++count;
          stack.push_back(j);
        }
      }
    }
    return count == n;
  };
  return reach_all(false) && reach_all(true);
}

SemigroupClass classify(const MatrixXd& M, const ClassifierConfig& cfg) {
  check_square_finite(M);
  const Index n = M.rows();
  const double scale = entry_scale(M);
  const double tol = cfg.sign_tolerance;
  const MatrixXd A = -0.5 * (M + M.transpose());

  SemigroupClass out;
  Evidence& ev = out.evidence;
  const MetzlerCheck mc = is_metzler(A, cfg);
  ev.metzler_margin = mc.margin;
  ev.irreducible = is_irreducible(A, cfg);

  Eigen::SelfAdjointEigenSolver<MatrixXd> es(A);
  const Eigen::VectorXd& lam = es.eigenvalues();  // ascending
  const double s1 = lam(n - 1);
  Index first = n - 1;
  while (first > 0 && lam(first - 1) >= s1 - 1e-9 * scale) --first;
  const Index dim = n - first;
  const MatrixXd V = es.eigenvectors().rightCols(dim);
  const MatrixXd P = V * V.transpose();
  ev.spectral_bound = s1;
  ev.eigenspace_dim = static_cast<int>(dim);
  ev.spectral_gap = first > 0 ? s1 - lam(first - 1) : 0.0;
  ev.projection_min = P.minCoeff();
  if (dim == 1) {
    ev.dominant = V.col(0);
    if (ev.dominant.sum() < 0) ev.dominant = -ev.dominant;
  }

  // (mu I + A)^k with mu centring the rest of the spectrum around zero.
  {
    const double s2 = first > 0 ? lam(first - 1) : s1 - 1.0;
    const double mu = -(s2 + lam(0)) / 2.0;
    const MatrixXd B = A + mu * MatrixXd::Identity(n, n);
    MatrixXd Pk = MatrixXd::Identity(n, n);
    for (int k = 1; k <= cfg.power_k_max; ++k) {
      Pk = Pk * B;
      const double big = Pk.cwiseAbs().maxCoeff();
      if (big > 0) Pk /= big;
      if (Pk.minCoeff() > tol) {
        ev.power_k = k;
        break;
      }
    }
  }

  if (mc.metzler) {
    out.verdict = ev.irreducible ? Verdict::Strong : Verdict::Positive;
    ev.criterion = ev.irreducible ? "metzler+irreducible" : "metzler+reducible";
    ev.power_agrees = !ev.irreducible || ev.power_k > 0;
    return out;
  }

  if (std::abs(ev.projection_min) <= tol) {
    out.verdict = Verdict::Marginal;
    ev.criterion = "projection-min-near-zero";
  } else if (ev.projection_min > tol) {
    out.verdict = Verdict::Eventual;
    ev.criterion = "projection-strictly-positive";
    if (ev.spectral_gap > 0) ev.t0_bound = std::log(1.0 / ev.projection_min) / ev.spectral_gap;
    ev.robustness = dim == 1 ? std::min(ev.projection_min * ev.spectral_gap / static_cast<double>(n), -mc.margin) : 0.0;
  } else {
    out.verdict = Verdict::None;
    ev.criterion = "projection-has-negative-entry";
    if (ev.spectral_gap > 0) ev.t0_bound = std::log(1.0 / std::abs(ev.projection_min)) / ev.spectral_gap;
  }
  ev.power_agrees = (ev.power_k > 0) == (out.verdict == Verdict::Eventual);
  return out;
}

std::vector<double> default_oracle_times(const MatrixXd& M) {
  const double norm = entry_scale(M);
  std::vector<double> t;
  for (int i = 0; i < 24; ++i) t.push_back(std::pow(10.0, -3.0 + 6.0 * i / 23.0) / norm);
  for (int i = 1; i <= 8; ++i) t.push_back(std::pow(10.0, 3.0 + 4.0 * i / 8.0) / norm);
  return t;
}

OracleResult expm_oracle(const MatrixXd& M, const ClassifierConfig& cfg) {
  check_square_finite(M);
  OracleResult r;
  r.times = cfg.oracle_times.empty() ? default_oracle_times(M) : cfg.oracle_times;
  std::sort(r.times.begin(), r.times.end());
  bool all_strict = true, all_nonneg = true;
  for (double t : r.times) {
    const MatrixXd E = expm_normalized(-t * M);
    const double rel = E.minCoeff() / E.cwiseAbs().maxCoeff();
    r.min_entry.push_back(rel);
    all_strict = all_strict && rel > 0.0;
    all_nonneg = all_nonneg && rel >= -cfg.sign_tolerance;
  }
  r.horizon = r.times.empty() ? 0.0 : r.times.back();
  std::size_t k = r.min_entry.size();
  while (k > 0 && r.min_entry[k - 1] > 0.0) --k;
  if (k < r.min_entry.size()) r.first_positive_time = r.times[k];

  if (all_strict) {
    r.observed = OracleClass::AllStrict;
  } else if (all_nonneg) {
    r.observed = OracleClass::AllNonneg;
  } else if (k < r.min_entry.size()) {
    r.observed = OracleClass::EventuallyStrict;
  } else {
    r.observed = OracleClass::NotPositiveAtHorizon;
  }
  return r;
}

Verdict oracle_verdict(OracleClass c) {
  switch (c) {
    case OracleClass::AllStrict: return Verdict::Strong;
    case OracleClass::AllNonneg: return Verdict::Positive;
    case OracleClass::EventuallyStrict: return Verdict::Eventual;
    case OracleClass::NotPositiveAtHorizon: return Verdict::None;
  }
  return Verdict::None;
}

GroupProbe group_positivity_probe(const MatrixXd& M, const ClassifierConfig& cfg) {
  check_square_finite(M);
  GroupProbe g;
  std::vector<double> times = cfg.oracle_times.empty() ? default_oracle_times(M) : cfg.oracle_times;
  g.group_positive = true;
  for (double t : times) {
    for (double sign : {1.0, -1.0}) {
      const MatrixXd E = expm_normalized(sign * t * M);
      if (E.minCoeff() < -cfg.sign_tolerance * E.cwiseAbs().maxCoeff()) g.group_positive = false;
    }
    if (!g.group_positive) break;
  }
  const double scale = entry_scale(M);
  g.is_diagonal = true;
  for (Index i = 0; i < M.rows(); ++i)
    for (Index j = 0; j < M.cols(); ++j)
      if (i != j && std::abs(M(i, j)) > cfg.sign_tolerance * scale) g.is_diagonal = false;
  g.implication_holds = !g.group_positive || g.is_diagonal;
  return g;
}

}  // namespace qgdtn
