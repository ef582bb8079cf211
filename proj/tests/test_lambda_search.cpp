#include "catch_amalgamated.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "qgdtn/catalog.hpp"
#include "qgdtn/dtn.hpp"
#include "qgdtn/error.hpp"
#include "qgdtn/lambda_search.hpp"

using namespace qgdtn;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using Eigen::MatrixXd;

namespace {

constexpr double pi = std::numbers::pi;

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

SearchOptions independent() {
  SearchOptions o;
  o.assert_independent = true;
  return o;
}

FindOptions find_opts() {
  FindOptions o;
  o.search.assert_independent = true;
  return o;
}

// Direct re-evaluation of the step windows from the returned lambda.
void check_windows(const KroneckerSequence& seq, const std::vector<double>& L, const TargetSpec& spec) {
  double prev = -1;
  for (const auto& st : seq.steps) {
    CHECK(st.lambda > prev);
    prev = st.lambda;
    const double l = st.ell;
    for (std::size_t e = 0; e < L.size(); ++e) {
      const double s = std::sin(std::sqrt(st.lambda) * L[e]);
      const double c = std::cos(std::sqrt(st.lambda) * L[e]);
      CHECK(std::abs(s - spec[e].at_step(st.ell) / l) < 1 / (l * l));
      CHECK(c > 0);
      CHECK(st.sin_residual[e] < 1 / l);
    }
  }
}

}  // namespace

TEST_CASE("targets") {
  CHECK(Target::plus_infinity().at_step(9) == 3.0);
  CHECK(Target::minus_infinity().at_step(16) == -4.0);
  CHECK(Target::finite(2.5).at_step(7) == 2.5);
  CHECK(Target::plus_infinity().inverse() == 0.0);
  CHECK(Target::finite(-4).inverse() == -0.25);
}

TEST_CASE("one length: direct phase solve") {
  const std::vector<double> L{1.0};
  const TargetSpec spec = uniform_targets(1, 1.0);
  const KroneckerSequence seq = kronecker_sequence(L, spec, 1, SearchOptions{});
  REQUIRE(seq.steps.size() == 1);
  const double r = std::sqrt(seq.steps[0].lambda);
  CHECK(std::sin(r) > 0);
  CHECK(std::cos(r) > 0);
  check_windows(seq, L, spec);
}

TEST_CASE("two independent lengths") {
  const std::vector<double> L{1.0, std::sqrt(2.0)};
  CHECK(code_of([&] { kronecker_sequence(L, uniform_targets(2, 1.0), 5, SearchOptions{}); }) ==
        ErrorCode::IndependenceNotAsserted);
  const TargetSpec spec = uniform_targets(2, 1.0);
  const KroneckerSequence seq = kronecker_sequence(L, spec, 5, independent());
  REQUIRE(seq.steps.size() == 5);
  check_windows(seq, L, spec);
  CHECK(seq.budget_used > 0);
}

TEST_CASE("negative targets make every sine negative") {
  const std::vector<double> L{1.0, std::sqrt(3.0), std::sqrt(5.0), std::sqrt(7.0)};
  const TargetSpec spec = uniform_targets(4, -1.0);
  const KroneckerSequence seq = kronecker_sequence(L, spec, 8, independent());
  check_windows(seq, L, spec);
  for (const auto& st : seq.steps)
    for (double len : L) CHECK(std::sin(std::sqrt(st.lambda) * len) < 0);
}

TEST_CASE("infinite and mixed targets") {
  const std::vector<double> L{1.0, std::sqrt(2.0), std::sqrt(3.0)};
  const TargetSpec spec{Target::plus_infinity(), Target::finite(-2.0), Target::minus_infinity()};
  const KroneckerSequence seq = kronecker_sequence(L, spec, 6, independent());
  check_windows(seq, L, spec);
}

TEST_CASE("tiny budget is reported as exhausted") {
  const std::vector<double> L{1.0, std::sqrt(3.0), std::sqrt(5.0), std::sqrt(7.0)};
  SearchOptions o = independent();
  o.budget = 5;
  CHECK(code_of([&] { kronecker_sequence(L, uniform_targets(4, 1.0), 10, o); }) == ErrorCode::BudgetExhausted);
}

TEST_CASE("limit matrix") {
  const SimpleGraph k2{2, {{0, 1}}};
  MatrixXd want(2, 2);
  want << 1, -1, -1, 1;
  CHECK(limit_matrix_Q(k2, uniform_targets(1, 1.0)) == want);
  CHECK(-limit_matrix_Q(k2, uniform_targets(1, 1.0)) == graph_laplacian(k2).cast<double>());

  const MetricGraph g = catalog_graph("figure-1");
  const SimpleGraph top = g.topology();
  TargetSpec spec = uniform_targets(top.edges.size(), 1.0);
  spec[3] = Target::plus_infinity();
  const MatrixXd Q = limit_matrix_Q(top, spec);
  const auto [a, b] = top.edges[3];
  CHECK(Q(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) == 0.0);
  CHECK(Q.rowwise().sum().cwiseAbs().maxCoeff() == 0.0);

  const MatrixXd Q1 = limit_matrix_Q(top, uniform_targets(top.edges.size(), 1.0));
  CHECK(Q1 == -graph_laplacian(top).cast<double>());
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(-Q1);
  CHECK_THAT(es.eigenvalues().maxCoeff(), WithinAbs(0.0, 1e-12));
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(Q1.rows());
  CHECK((Q1 * ones).cwiseAbs().maxCoeff() == 0.0);
  // Gershgorin discs of -Q are centred at -deg with radius deg: they touch 0 from the left
  for (Eigen::Index i = 0; i < Q1.rows(); ++i) {
    const double radius = Q1.row(i).cwiseAbs().sum() - std::abs(Q1(i, i));
    CHECK(-Q1(i, i) + radius == 0.0);
  }

  const MatrixXd Qm = limit_matrix_Q(top, uniform_targets(top.edges.size(), -1.0));
  CHECK(Qm == graph_laplacian(top).cast<double>());
}

TEST_CASE("limit matrix on the outer block is the Schur complement of Q") {
  const MetricGraph g = catalog_graph("lasso-4");
  const TargetSpec spec = uniform_targets(g.edges().size(), 1.0);
  const MatrixXd Q = limit_matrix_Q(g.topology(), spec);
  const MatrixXd S = limit_matrix_outer(g, spec);
  const MatrixXd want = Q.topLeftCorner(3, 3) - Q.topRightCorner(3, 1) * Q.bottomRightCorner(1, 1).inverse() * Q.bottomLeftCorner(1, 3);
  CHECK((S - want).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("convergence of the rescaled matrix") {
  {
    const MetricGraph g = interval_graph(1.0);
    const TargetSpec spec = uniform_targets(1, 1.0);
    const LimitReport rep = verify_limit(g, spec, kronecker_sequence(g.lengths(), spec, 10, SearchOptions{}));
    CHECK(rep.decreasing);
    CHECK(rep.final_error < 0.2);
  }
  const MetricGraph g = catalog_graph("lasso-4").with_outer({"v1", "v2", "v3", "v4"});
  for (double gamma : {1.0, -1.0}) {
    const TargetSpec spec = uniform_targets(4, gamma);
    const KroneckerSequence seq = kronecker_sequence(g.lengths(), spec, 12, independent());
    const LimitReport rep = verify_limit(g, spec, seq);
    CHECK(rep.decreasing);
    CHECK(rep.final_error < rep.initial_error);
    CHECK(rep.skipped_at_pole.empty());
  }
  CHECK(code_of([&] {
          const MetricGraph h = catalog_graph("lasso-4");
          verify_limit(h, uniform_targets(4, 1.0), KroneckerSequence{});
        }) == ErrorCode::PreconditionFailed);
}

TEST_CASE("strongly positive lambda above a threshold") {
  const FoundLambda a = find_strongly_positive_above(interval_graph(1.0), 50.0, find_opts());
  CHECK(a.lambda > 50.0);
  const double k = std::floor(std::sqrt(a.lambda) / pi);
  CHECK(static_cast<long long>(k) % 2 == 0);
  CHECK(a.classification.verdict == Verdict::Strong);

  const MetricGraph p3 = catalog_graph("path-3");
  const FoundLambda b = find_strongly_positive_above(p3, 10.0, find_opts());
  CHECK(b.lambda > 10.0);
  CHECK(std::sin(std::sqrt(b.lambda)) > 0);
  CHECK(classify(assemble_outer(p3, b.lambda).entries).verdict == Verdict::Strong);

  const MetricGraph lasso = catalog_graph("lasso-4");
  const FoundLambda c = find_strongly_positive_above(lasso, 20.0, find_opts());
  CHECK(c.lambda > 20.0);
  CHECK(classify(assemble_outer(lasso, c.lambda).entries).verdict == Verdict::Strong);
}

TEST_CASE("not eventually positive lambda above a threshold") {
  const FoundLambda a = find_not_eventually_positive_above(interval_graph(1.0), 50.0, find_opts());
  CHECK(a.lambda > 50.0);
  CHECK(std::sin(std::sqrt(a.lambda)) < 0);
  CHECK(a.classification.verdict == Verdict::None);

  const MetricGraph ev = catalog_graph("evpos-counterexample");
  const FoundLambda b = find_not_eventually_positive_above(ev, 10.0, find_opts());
  CHECK(b.lambda > 10.0);
  CHECK(classify(assemble_outer(ev, b.lambda).entries).verdict == Verdict::None);

  CHECK(code_of([&] { find_not_eventually_positive_above(catalog_graph("path-3").with_outer({"v1"}), 10.0, find_opts()); }) ==
        ErrorCode::PreconditionFailed);
  CHECK(code_of([&] { find_not_eventually_positive_above(ev, 10.0, FindOptions{}); }) == ErrorCode::IndependenceNotAsserted);
}

TEST_CASE("eventual limit candidates") {
  for (const char* name : {"lasso-4", "star-5"}) {
    const auto cands = eventual_candidates(catalog_graph(name));
    REQUIRE_FALSE(cands.empty());
    for (const auto& c : cands) {
      CHECK(c.limit_class.verdict == Verdict::Eventual);
      CHECK_FALSE(c.construction.empty());
    }
  }
}

TEST_CASE("eventually positive but not positive lambda above a threshold") {
  for (const char* name : {"lasso-4", "star-5"}) {
    const MetricGraph g = catalog_graph(name);
    const FoundLambda f = find_eventual_not_positive_above(g, 5.0, find_opts());
    CHECK(f.lambda > 5.0);
    CHECK(f.classification.verdict == Verdict::Eventual);
    const SemigroupClass again = classify(assemble_outer(g, f.lambda).entries);
    CHECK(again.verdict == Verdict::Eventual);
    CHECK(again.evidence.metzler_margin < 0);
  }
  CHECK(code_of([&] { find_eventual_not_positive_above(catalog_graph("evpos-counterexample"), 5.0, find_opts()); }) ==
        ErrorCode::NoCycle);
}

TEST_CASE("commensurable lengths") {
  Commensurability c = detect_commensurable({2.0, 4.0, 6.0});
  CHECK(c.base == 2.0);
  CHECK(c.multiples == std::vector<long long>{1, 2, 3});
  c = detect_commensurable({1.5, 2.5});
  CHECK_THAT(c.base, WithinRel(0.5, 1e-12));
  CHECK(code_of([] { detect_commensurable({1.0, std::sqrt(2.0)}); }) == ErrorCode::NotCommensurable);

  const MetricGraph g = interval_graph(1.0);
  const CommensurableFamily fam = commensurable_family(g, 1.0, {1, 3});
  REQUIRE(fam.members.size() == 2);
  CHECK_THAT(fam.members[0].lambda, WithinRel(std::pow(1 + 2 * pi, 2), 1e-14));
  for (const auto& m : fam.members) {
    CHECK(m.scaling_error <= 1e-9);
    CHECK(m.classification.verdict == Verdict::Strong);
  }
  CHECK(code_of([&] { commensurable_family(g, pi * pi + 0.1, {1}); }) == ErrorCode::MuOutOfRange);
  CHECK(code_of([&] { commensurable_family(g, -1.0, {1}); }) == ErrorCode::MuOutOfRange);
  CHECK(code_of([&] { commensurable_family(catalog_graph("path-3"), 0.01, {1}); }) == ErrorCode::NotCommensurable);
}

TEST_CASE("integer relation probe") {
  const auto rel = independence_probe({1.0, 2.5, std::sqrt(2.0)});
  REQUIRE(rel.size() == 1);
  CHECK(rel[0].i == 0);
  CHECK(rel[0].j == 1);
  CHECK(static_cast<double>(rel[0].p) / static_cast<double>(rel[0].q) == 0.4);
  CHECK(independence_probe(catalog_graph("figure-1").lengths()).empty());
}
