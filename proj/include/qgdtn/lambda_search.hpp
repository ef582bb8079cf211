#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qgdtn/metric_graph.hpp"
#include "qgdtn/positivity.hpp"

namespace qgdtn {

/// Per-edge target gamma_e for the Kronecker search. Infinite targets are
/// realized at step l by gamma_{e,l} = +-sqrt(l).
struct Target {
  enum class Kind { Finite, PlusInfinity, MinusInfinity };
  Kind kind = Kind::Finite;
  double value = 1.0;
  int zero_sign = 0;  // for value == 0: +1 / -1 restricts the sign of sin, 0 allows both

  static Target finite(double v) { return {Kind::Finite, v, 0}; }
  static Target plus_infinity() { return {Kind::PlusInfinity, 0.0, 0}; }
  static Target minus_infinity() { return {Kind::MinusInfinity, 0.0, 0}; }

  bool is_infinite() const { return kind != Kind::Finite; }
  double at_step(int l) const;
  // 1 / gamma with 1 / +-inf = 0.
  double inverse() const;
};

using TargetSpec = std::vector<Target>;

TargetSpec uniform_targets(std::size_t edges, double gamma);

struct SearchOptions {
  bool assert_independent = false;
  std::uint64_t budget = 10'000'000;
  // Accepted hits lie in the central fraction of each phase window.
  double window_fraction = 0.5;
  double mu_start = 0.0;  // sqrt(lambda) must exceed this
};

struct KroneckerStep {
  int ell = 0;
  double lambda = 0.0;
  long double mu = 0.0;
  std::vector<double> sin_residual;  // |l sin(sqrt(lambda) L_e) - gamma_{e,l}|
  std::vector<double> cos_residual;  // |cos(sqrt(lambda) L_e) - 1|
};

struct KroneckerSequence {
  std::vector<KroneckerStep> steps;
  std::vector<int> skipped;  // l with an empty window
  std::uint64_t budget_used = 0;
};

/// For l = 1..count finds lambda_l > lambda_{l-1} with
/// |sin(sqrt(lambda_l) L_e) - gamma_{e,l} / l| < 1/l^2 and cos(...) > 0 for all
/// edges. Throws IndependenceNotAsserted without the flag (unless only one
/// length is given) and BudgetExhausted when the point budget runs out.
KroneckerSequence kronecker_sequence(const std::vector<double>& lengths, const TargetSpec& spec, int count,
                                     const SearchOptions& opts);

/// Searches a single step: the smallest-effort lambda with sqrt(lambda) > mu_min
/// satisfying the step-l windows. Budget is charged in `used`.
std::optional<KroneckerStep> kronecker_step(const std::vector<double>& lengths, const TargetSpec& spec, int ell,
                                            long double mu_min, const SearchOptions& opts, std::uint64_t& used);

// Pairs (i, j, p, q) with L_i / L_j = p / q, q <= 1e6, found by continued fractions.
struct LengthRelation {
  std::size_t i = 0, j = 0;
  long long p = 0, q = 0;
};
std::vector<LengthRelation> independence_probe(const std::vector<double>& lengths);

/// Q on all vertices: off-diagonal -1/gamma_e on edges, zero row sums.
Eigen::MatrixXd limit_matrix_Q(const SimpleGraph& g, const TargetSpec& spec);

/// Limit of D_{lambda_l, V_outer} / (l sqrt(lambda_l)): Schur complement of Q
/// onto the outer block of the canonical order.
Eigen::MatrixXd limit_matrix_outer(const MetricGraph& g, const TargetSpec& spec);

struct LimitReport {
  std::vector<int> ells;
  std::vector<double> errors;  // max-norm of D/(l sqrt(lambda)) - Q
  std::vector<int> skipped_at_pole;
  double initial_error = 0.0;
  double final_error = 0.0;
  bool decreasing = false;  // final error below initial error
};

LimitReport verify_limit(const MetricGraph& g, const TargetSpec& spec, const KroneckerSequence& seq);

struct FoundLambda {
  double lambda = 0.0;
  SemigroupClass classification;
  int ell = 0;
  std::vector<double> sin_residual;
  std::vector<double> cos_residual;
  std::uint64_t budget_used = 0;
  TargetSpec targets;
  std::string construction;
};

struct FindOptions {
  SearchOptions search;
  ClassifierConfig classifier;
  int max_ell = 40;
};

FoundLambda find_strongly_positive_above(const MetricGraph& g, double lambda_hat, const FindOptions& opts);
FoundLambda find_not_eventually_positive_above(const MetricGraph& g, double lambda_hat, const FindOptions& opts);
FoundLambda find_eventual_not_positive_above(const MetricGraph& g, double lambda_hat, const FindOptions& opts);

/// Target candidates for the eventual search, best first, each with the
/// verdict of its limit matrix. Exposed for inspection and tests.
struct EventualCandidate {
  TargetSpec targets;
  std::string construction;
  SemigroupClass limit_class;
};
std::vector<EventualCandidate> eventual_candidates(const MetricGraph& g, const ClassifierConfig& cfg = {});

struct Commensurability {
  double base = 0.0;             // maximal L with L_e = n_e L
  std::vector<long long> multiples;
};

/// Detects L_e = n_e L (tolerance 1e-9) with the largest such L; throws
/// NotCommensurable.
Commensurability detect_commensurable(const std::vector<double>& lengths);

struct CommensurableMember {
  long long p = 0;
  double lambda = 0.0;
  SemigroupClass classification;
  double scaling_error = 0.0;  // max relative entry difference of D/sqrt(lambda) vs D_mu/sqrt(mu)
};

struct CommensurableFamily {
  Commensurability lengths;
  double mu = 0.0;
  double lambda1 = 0.0;
  std::vector<CommensurableMember> members;
};

/// lambda_p = (sqrt(mu) + 2 pi p / L)^2; throws MuOutOfRange unless 0 < mu < lambda_1.
CommensurableFamily commensurable_family(const MetricGraph& g, double mu, const std::vector<long long>& p_list,
                                         const ClassifierConfig& cfg = {});

}  // namespace qgdtn
