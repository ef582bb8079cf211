#include "catch_amalgamated.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "qgdtn/catalog.hpp"
#include "qgdtn/dtn.hpp"
#include "qgdtn/error.hpp"

using namespace qgdtn;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double pi = std::numbers::pi;

bool admissible(const MetricGraph& g, double lambda) {
  try {
    assemble_outer(g, lambda);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

TEST_CASE("edge coefficients at zero, quarter wave and negative lambda") {
  auto c = edge_alpha_beta(0.0, 2.0);
  CHECK(c.alpha == 0.5);
  CHECK(c.beta == 0.5);

  c = edge_alpha_beta(pi * pi / 4, 1.0);
  CHECK_THAT(c.alpha, WithinAbs(0.0, 1e-15));
  CHECK_THAT(c.beta, WithinRel(pi / 2, 1e-15));

  c = edge_alpha_beta(-1.0, 1.0);
  CHECK_THAT(c.beta, WithinRel(0.8509181282393215451338, 1e-15));
  CHECK_THAT(c.alpha, WithinRel(1.3130352854993313036362, 1e-15));
}

TEST_CASE("Dirichlet eigenvalue of an edge is a pole") {
  CHECK_THROWS_MATCHES(edge_alpha_beta(pi * pi, 1.0), Error,
                       Catch::Matchers::Predicate<Error>([](const Error& e) { return e.code() == ErrorCode::AtPole; }));
  CHECK(is_edge_pole(4 * pi * pi, 1.0));
  CHECK_FALSE(is_edge_pole(4 * pi * pi * (1 + 1e-9), 1.0));
  CHECK_FALSE(is_edge_pole(-pi * pi, 1.0));
  CHECK_THROWS_AS(assemble_full(interval_graph(1.0), pi * pi), Error);
}

TEST_CASE("beta never vanishes for very negative lambda") {
  const auto c = edge_alpha_beta(-1e6, 10.0);
  CHECK(c.beta > 0.0);
  CHECK_THAT(c.alpha, WithinRel(1000.0, 1e-12));
}

TEST_CASE("series branch joins the trigonometric formulas") {
  const double L = 1.3;
  for (double z : {0.99e-8, -0.99e-8}) {
    const double lam = z / (L * L);
    const auto series = edge_coefficients(lam, L);
    const double lam_out = 1.01e-8 / (L * L) * (z > 0 ? 1 : -1);
    const auto closed = edge_coefficients(lam_out, L);
    CHECK_THAT(series.beta, WithinRel(closed.beta, 1e-9));
    CHECK_THAT(series.alpha, WithinRel(closed.alpha, 1e-9));
  }
}

TEST_CASE("single edge at lambda zero") {
  const double L = 0.8;
  const Eigen::MatrixXd D = assemble_full(interval_graph(L), 0.0).entries;
  Eigen::Matrix2d want;
  want << 1, -1, -1, 1;
  CHECK((D - want / L).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("removable singularity at lambda zero") {
  const MetricGraph g = catalog_graph("lasso-4").with_outer({"v1", "v2", "v3", "v4"});
  const Eigen::MatrixXd D0 = assemble_full(g, 0.0).entries;
  double prev = 1e300;
  for (int k = 1; k <= 14; ++k) {
    for (double sign : {1.0, -1.0}) {
      const double lam = sign * std::pow(10.0, -k);
      const double err = (assemble_full(g, lam).entries - D0).cwiseAbs().maxCoeff();
      CHECK(err <= 2 * std::abs(lam) + 1e-15);
      if (sign > 0) {
        CHECK(err <= prev);
        prev = err;
      }
    }
  }
}

TEST_CASE("path with lengths 1 and sqrt 17: full matrix structure") {
  const MetricGraph g = catalog_graph("path-3").with_outer({"v1", "v2", "v3"});
  const double lam = 2.7;
  const auto a = edge_alpha_beta(lam, 1.0), b = edge_alpha_beta(lam, std::sqrt(17.0));
  Eigen::Matrix3d want;
  want << a.alpha, -a.beta, 0, -a.beta, a.alpha + b.alpha, -b.beta, 0, -b.beta, b.alpha;
  const DtnMatrix d = assemble_full(g, lam);
  CHECK(d.provenance == Provenance::Direct);
  CHECK((d.entries - want).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("full matrix of the lasso has zeros exactly off the edges") {
  const MetricGraph g = catalog_graph("lasso-4").with_outer({"v1", "v2", "v3", "v4"});
  const Eigen::MatrixXd D = assemble_full(g, 3.3).entries;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      const bool zero = (std::min(i, j) == 0 && (std::max(i, j) == 1 || std::max(i, j) == 2));
      CHECK((D(i, j) == 0.0) == zero);
    }
}

TEST_CASE("Schur complement on the path example") {
  const MetricGraph g = catalog_graph("path-3");
  const double lam = 7.1;
  const auto a = edge_alpha_beta(lam, 1.0), b = edge_alpha_beta(lam, std::sqrt(17.0));
  Eigen::Matrix2d want;
  want << a.alpha, -a.beta, -a.beta, a.alpha + b.alpha - b.beta * b.beta / b.alpha;
  const DtnMatrix full = assemble_full(g, lam);
  const DtnMatrix red = schur_reduce(full, 2);
  CHECK(red.provenance == Provenance::Schur);
  CHECK(red.eliminated == 1);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK_THAT(red.entries(i, j), WithinRel(want(i, j), 1e-12));
  CHECK((assemble_outer(g, lam).entries - red.entries).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("Schur correction on the lasso is rank one") {
  const MetricGraph g = catalog_graph("lasso-4");
  const double lam = 4.2;
  const DtnMatrix full = assemble_full(g, lam);
  const DtnMatrix red = assemble_outer(g, lam);
  const double denom = full.entries(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double corr = full.entries(i, 3) * full.entries(3, j) / denom;
      CHECK_THAT(full.entries(i, j) - red.entries(i, j), WithinAbs(corr, 1e-12 * (1 + std::abs(corr))));
    }
}

TEST_CASE("no inner vertices: Schur step is the identity") {
  const MetricGraph g = catalog_graph("lasso-4").with_outer({"v1", "v2", "v3", "v4"});
  const DtnMatrix full = assemble_full(g, 1.7);
  CHECK(schur_reduce(full, 4).entries == full.entries);
  CHECK(assemble_outer(g, 1.7).entries == full.entries);
  CHECK(assemble_outer(g, 1.7).provenance == Provenance::Direct);
}

TEST_CASE("eigenvalue of the inner problem makes the inner block singular") {
  const MetricGraph g = catalog_graph("path-3");
  const double lam = std::pow(pi / (2 * std::sqrt(17.0)), 2);
  try {
    assemble_outer(g, lam);
    FAIL("expected InnerBlockSingular");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InnerBlockSingular);
  }
}

TEST_CASE("lasso: every off-diagonal entry generically nonzero") {
  const MetricGraph g = catalog_graph("lasso-4");
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.0, 100.0);
  int n = 0;
  while (n < 20) {
    const double lam = U(rng);
    if (!admissible(g, lam)) continue;
    const Eigen::MatrixXd D = assemble_outer(g, lam).entries;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j) CHECK(std::abs(D(i, j)) > 0.0);
    ++n;
  }
}

TEST_CASE("symmetry and zero pattern on every catalog graph") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-20.0, 200.0);
  for (const auto& name : catalog_names()) {
    const MetricGraph g = catalog_graph(name);
    const AdjacencyPattern p = adjacency_pattern(reduced_graph(g));
    int n = 0;
    while (n < 100) {
      const double lam = U(rng);
      DtnMatrix d;
      try {
        d = assemble_outer(g, lam);
      } catch (const Error& e) {
        REQUIRE(e.code() != ErrorCode::PatternViolation);
        continue;
      }
      ++n;
      CHECK((d.entries - d.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
      const double scale = d.entries.cwiseAbs().maxCoeff();
      for (Eigen::Index i = 0; i < d.entries.rows(); ++i)
        for (Eigen::Index j = 0; j < d.entries.cols(); ++j)
          if (i != j && !p.allows(static_cast<Index>(i), static_cast<Index>(j)))
            CHECK(std::abs(d.entries(i, j)) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("scaling identity for a single edge") {
  const MetricGraph g = interval_graph(1.0);
  const double mu = 1.0;
  const double lam = std::pow(1.0 + 2 * pi, 2);
  CHECK_THAT(lam, WithinRel(53.0, 1e-2));
  const Eigen::MatrixXd a = assemble_outer(g, lam).entries / std::sqrt(lam);
  const Eigen::MatrixXd b = assemble_outer(g, mu).entries;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK_THAT(a(i, j), WithinRel(b(i, j), 1e-9));
}

TEST_CASE("pole residues") {
  CHECK_THAT(pole_residue_probe(interval_graph(1.0), 1, 0), WithinRel(-2 * pi * pi, 1e-6));
  CHECK_THAT(pole_residue_probe(interval_graph(1.0), 2, 0), WithinRel(8 * pi * pi, 1e-6));
  // (lambda - lambda*) beta -> 2 (-1)^k (pi k / L)^2 / L; for L = 2, k = 1 this is -pi^2/4.
  CHECK_THAT(pole_residue_probe(interval_graph(2.0), 1, 0), WithinRel(-2.4674011002723396547, 1e-6));
  CHECK_THAT(pole_residue_exact(2.0, 1), WithinRel(-2.4674011002723396547, 1e-15));

  const MetricGraph two = validate({{"a", "b", "c"}, {{"a", "b", 1.0}, {"b", "c", 1.0 + 1e-6}}, {"a", "b", "c"}});
  try {
    pole_residue_probe(two, 1, 0);
    FAIL("expected PoleCluster");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PoleCluster);
  }
}
