#include "qgdtn/lambda_search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>

#include "lattice.hpp"
#include "qgdtn/dtn.hpp"
#include "qgdtn/error.hpp"
#include "qgdtn/spectra.hpp"

namespace qgdtn {

using detail::Real;
using EIdx = Eigen::Index;
using Eigen::MatrixXd;

namespace {

// First continued-fraction convergent p/q of x with q <= 1e6 and
// |x - p/q| <= min(tol x, 1e-3 / q^2). The second bound rejects the
// approximations every real number has (Dirichlet: |x - p/q| < 1/q^2).
std::optional<std::pair<long long, long long>> rational_relation(long double x, long double tol) {
  long double frac = x;
  long long p0 = 1, q0 = 0, p1 = static_cast<long long>(std::floor(frac)), q1 = 1;
  frac -= std::floor(frac);
  for (int it = 0; it < 64 && q1 <= 1000000; ++it) {
    const long double err = std::abs(x - static_cast<long double>(p1) / q1);
    if (err <= tol * x && err * q1 * q1 <= 1e-3L) return std::pair{p1, q1};
    if (frac < 1e-18L) break;
    frac = 1 / frac;
    const long long a = static_cast<long long>(std::floor(frac));
    frac -= a;
    const long long p2 = a * p1 + p0, q2 = a * q1 + q0;
    p0 = p1, q0 = q1, p1 = p2, q1 = q2;
  }
  return std::nullopt;
}

constexpr Real kTwoPi = 2.0L * std::numbers::pi_v<long double>;

}  // namespace

double Target::at_step(int l) const {
  switch (kind) {
    case Kind::Finite: return value;
    case Kind::PlusInfinity: return std::sqrt(static_cast<double>(l));
    case Kind::MinusInfinity: return -std::sqrt(static_cast<double>(l));
  }
  return value;
}

double Target::inverse() const {
  if (is_infinite()) return 0.0;
  if (value == 0.0) throw Error(ErrorCode::InvalidArgument, "target 0 has no inverse");
  return 1.0 / value;
}

TargetSpec uniform_targets(std::size_t edges, double gamma) { return TargetSpec(edges, Target::finite(gamma)); }

namespace {

struct Window {
  double sin_lo = 0, sin_hi = 0;  // full acceptance window in sin
  Real center = 0, half = 0;      // search window in phase
};

// Returns false when the window misses (-1, 1).
bool make_window(const Target& t, int l, double fraction, Window& w) {
  const double c = t.at_step(l) / l;
  const double r = 1.0 / (static_cast<double>(l) * l);
  w.sin_lo = c - r;
  w.sin_hi = c + r;
  if (!t.is_infinite() && t.value == 0.0) {
    if (t.zero_sign > 0) w.sin_lo = 0.0;
    if (t.zero_sign < 0) w.sin_hi = 0.0;
  }
  if (w.sin_lo >= 1.0 || w.sin_hi <= -1.0 || w.sin_lo >= w.sin_hi) return false;
  const Real lo = std::asin(static_cast<Real>(std::max(w.sin_lo, -1.0)));
  const Real hi = std::asin(static_cast<Real>(std::min(w.sin_hi, 1.0)));
  w.center = (lo + hi) / 2;
  w.half = fraction * (hi - lo) / 2;
  return w.half > 0;
}

// Signed distance of x to c modulo 2 pi, in (-pi, pi].
Real wrapped(Real x, Real c) {
  Real d = std::fmod(x - c, kTwoPi);
  if (d > kTwoPi / 2) d -= kTwoPi;
  if (d <= -kTwoPi / 2) d += kTwoPi;
  return d;
}

bool in_phase_windows(Real mu, const std::vector<double>& L, const std::vector<Window>& w) {
  for (std::size_t e = 0; e < L.size(); ++e)
    if (std::abs(wrapped(mu * static_cast<Real>(L[e]), w[e].center)) >= w[e].half) return false;
  return true;
}

// Acceptance check through the same double arithmetic the assembly uses.
std::optional<KroneckerStep> accept(Real mu, int l, const std::vector<double>& L, const TargetSpec& spec,
                                    const std::vector<Window>& w) {
  KroneckerStep st;
  st.ell = l;
  st.mu = mu;
  st.lambda = static_cast<double>(mu * mu);
  const double r = std::sqrt(st.lambda);
  for (std::size_t e = 0; e < L.size(); ++e) {
    const double s = std::sin(r * L[e]), c = std::cos(r * L[e]);
    if (!(s > w[e].sin_lo && s < w[e].sin_hi && c > 0.0)) return std::nullopt;
    st.sin_residual.push_back(std::abs(l * s - spec[e].at_step(l)));
    st.cos_residual.push_back(std::abs(c - 1.0));
  }
  return st;
}

std::size_t pivot_edge(const std::vector<double>& L) {
  return static_cast<std::size_t>(std::max_element(L.begin(), L.end()) - L.begin());
}

struct Interval {
  Real a, b;
};

// Direct scan over pivot turns, intersecting exact phase intervals.
std::optional<KroneckerStep> scan(const std::vector<double>& L, const TargetSpec& spec, int l,
                                  const std::vector<Window>& w, Real mu_min, std::uint64_t max_turns,
                                  std::uint64_t budget, std::uint64_t& used) {
  const std::size_t p = pivot_edge(L);
  const Real Lp = L[p];
  Real n0 = std::floor((mu_min * Lp - w[p].center - w[p].half) / kTwoPi);
  for (std::uint64_t turn = 0; turn < max_turns && used < budget; ++turn) {
    ++used;
    const Real n = n0 + static_cast<Real>(turn);
    std::vector<Interval> pieces{{(kTwoPi * n + w[p].center - w[p].half) / Lp, (kTwoPi * n + w[p].center + w[p].half) / Lp}};
    pieces[0].a = std::max(pieces[0].a, mu_min * (1 + 4 * std::numeric_limits<Real>::epsilon()));
    if (pieces[0].a >= pieces[0].b) continue;
    for (std::size_t e = 0; e < L.size() && !pieces.empty(); ++e) {
      if (e == p) continue;
      const Real Le = L[e];
      std::vector<Interval> next;
      for (const auto& iv : pieces) {
        const Real j_lo = std::floor((iv.a * Le - w[e].center - w[e].half) / kTwoPi);
        const Real j_hi = std::ceil((iv.b * Le - w[e].center + w[e].half) / kTwoPi);
        for (Real j = j_lo; j <= j_hi; ++j) {
          const Real a = std::max(iv.a, (kTwoPi * j + w[e].center - w[e].half) / Le);
          const Real b = std::min(iv.b, (kTwoPi * j + w[e].center + w[e].half) / Le);
          if (a < b) next.push_back({a, b});
        }
      }
      pieces = std::move(next);
    }
    for (const auto& iv : pieces) {
      const Real mu = (iv.a + iv.b) / 2;
      if (auto st = accept(mu, l, L, spec, w)) return st;
    }
  }
  return std::nullopt;
}

// Simultaneous approximation through a reduced lattice and Babai rounding.
std::optional<KroneckerStep> lattice_search(const std::vector<double>& L, const TargetSpec& spec, int l,
                                            const std::vector<Window>& w, Real mu_min, std::uint64_t budget,
                                            std::uint64_t& used) {
  const std::size_t p = pivot_edge(L);
  const Real Lp = L[p];
  std::vector<std::size_t> others;
  for (std::size_t e = 0; e < L.size(); ++e)
    if (e != p) others.push_back(e);
  const std::size_t d = others.size();

  const Real n_min = std::ceil((mu_min * Lp - w[p].center) / kTwoPi) + 1;
  if (d == 0) {
    ++used;
    return accept((kTwoPi * n_min + w[p].center) / Lp, l, L, spec, w);
  }

  std::vector<Real> r(d), W(d), tau(d);
  Real volume = 1;
  for (std::size_t i = 0; i < d; ++i) {
    const std::size_t e = others[i];
    r[i] = static_cast<Real>(L[e]) / Lp;
    W[i] = kTwoPi / w[e].half;
    tau[i] = (w[e].center - w[p].center * r[i]) / kTwoPi;
    volume *= W[i];
  }

  for (int attempt = 0; used < budget; ++attempt) {
    const Real scale = std::pow(4.0L, std::min(attempt, 4));
    const Real N = std::ceil(volume * scale);
    const Real K0 = n_min + N * (1 + 2 * std::max(0, attempt - 4));
    if (!(K0 * kTwoPi < 1e17L)) return std::nullopt;

    detail::RealMatrix basis(d + 1, std::vector<Real>(d + 1, 0));
    for (std::size_t i = 0; i < d; ++i) {
      basis[0][i] = W[i] * r[i];
      basis[i + 1][i] = W[i];
    }
    basis[0][d] = 1 / N;
    std::vector<Real> target(d + 1, 0);
    for (std::size_t i = 0; i < d; ++i) {
      Real t = std::fmod(tau[i] - std::fmod(K0 * r[i], 1.0L), 1.0L);
      if (t >= 0.5L) t -= 1;
      if (t < -0.5L) t += 1;
      target[i] = W[i] * t;
    }
    std::vector<std::vector<long long>> U;
    detail::lll_reduce(basis, U);
    const std::vector<long long> c = detail::babai(basis, target);

    std::vector<Real> found;
    std::vector<int> delta(d + 1, -1);
    for (;;) {
      if (used >= budget) break;
      ++used;
      Real k = 0;
      for (std::size_t i = 0; i <= d; ++i) k += static_cast<Real>(c[i] + delta[i]) * static_cast<Real>(U[i][0]);
      const Real n = K0 + k;
      if (n >= n_min) {
        const Real mu = (kTwoPi * n + w[p].center) / Lp;
        if (mu > mu_min && in_phase_windows(mu, L, w)) found.push_back(mu);
      }
      std::size_t pos = 0;
      while (pos <= d && delta[pos] == 1) delta[pos++] = -1;
      if (pos > d) break;
      ++delta[pos];
    }
    std::sort(found.begin(), found.end());
    for (Real mu : found)
      if (auto st = accept(mu, l, L, spec, w)) return st;
  }
  return std::nullopt;
}

}  // namespace

std::optional<KroneckerStep> kronecker_step(const std::vector<double>& L, const TargetSpec& spec, int l,
                                            long double mu_min, const SearchOptions& opts, std::uint64_t& used) {
  if (L.size() != spec.size()) throw Error(ErrorCode::InvalidArgument, "one target per edge required");
  if (L.empty()) throw Error(ErrorCode::InvalidArgument, "no edges");
  std::vector<Window> w(L.size());
  for (std::size_t e = 0; e < L.size(); ++e)
    if (!make_window(spec[e], l, opts.window_fraction, w[e])) return std::nullopt;

  // Expected number of pivot turns for a plain scan.
  const std::size_t p = pivot_edge(L);
  long double expected = 1;
  for (std::size_t e = 0; e < L.size(); ++e) {
    if (e == p) continue;
    const long double hit = (2 * w[e].half + 2 * w[p].half * L[e] / L[p]) / kTwoPi;
    expected /= std::min(1.0L, hit);
  }
  const Real lo = std::max<Real>(mu_min, 0);
  if (expected <= 2e4L) {
    const auto turns = static_cast<std::uint64_t>(50 * expected + 1000);
    if (auto st = scan(L, spec, l, w, lo, turns, opts.budget, used)) return st;
  }
  return lattice_search(L, spec, l, w, lo, opts.budget, used);
}

KroneckerSequence kronecker_sequence(const std::vector<double>& lengths, const TargetSpec& spec, int count,
                                     const SearchOptions& opts) {
  if (lengths.size() > 1 && !opts.assert_independent)
    throw Error(ErrorCode::IndependenceNotAsserted, "rational independence of the edge lengths must be asserted");
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be >= 1");
  KroneckerSequence seq;
  long double mu = opts.mu_start;
  for (int l = 1; l <= count; ++l) {
    std::vector<Window> w(lengths.size());
    bool empty = false;
    for (std::size_t e = 0; e < lengths.size(); ++e) empty = empty || !make_window(spec.at(e), l, opts.window_fraction, w[e]);
    if (empty) {
      seq.skipped.push_back(l);
      continue;
    }
    auto st = kronecker_step(lengths, spec, l, mu, opts, seq.budget_used);
    if (!st) {
      std::ostringstream msg;
      msg << "no hit for l=" << l << " after " << seq.budget_used << " points; " << seq.steps.size()
          << " steps completed";
      throw Error(ErrorCode::BudgetExhausted, msg.str());
    }
    mu = st->mu;
    seq.steps.push_back(std::move(*st));
  }
  return seq;
}

std::vector<LengthRelation> independence_probe(const std::vector<double>& L) {
  std::vector<LengthRelation> out;
  for (std::size_t i = 0; i < L.size(); ++i) {
    for (std::size_t j = i + 1; j < L.size(); ++j) {
      if (auto r = rational_relation(static_cast<long double>(L[i]) / L[j], 1e-13L)) out.push_back({i, j, r->first, r->second});
    }
  }
  return out;
}

MatrixXd limit_matrix_Q(const SimpleGraph& g, const TargetSpec& spec) {
  if (spec.size() != g.edges.size()) throw Error(ErrorCode::InvalidArgument, "one target per edge required");
  const auto n = static_cast<EIdx>(g.n);
  MatrixXd Q = MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const double w = spec[k].inverse();
    const auto u = static_cast<EIdx>(g.edges[k].first), v = static_cast<EIdx>(g.edges[k].second);
    Q(u, v) -= w;
    Q(v, u) -= w;
    Q(u, u) += w;
    Q(v, v) += w;
  }
  return Q;
}

MatrixXd limit_matrix_outer(const MetricGraph& g, const TargetSpec& spec) {
  const MatrixXd Q = limit_matrix_Q(g.topology(), spec);
  const auto m = static_cast<EIdx>(g.outer_count());
  const EIdx k = Q.rows() - m;
  if (k == 0) return Q;
  const MatrixXd C = Q.bottomRightCorner(k, k);
  Eigen::FullPivLU<MatrixXd> lu(C);
  if (!lu.isInvertible()) throw Error(ErrorCode::InnerBlockSingular, "inner block of the limit matrix is singular");
  MatrixXd S = Q.topLeftCorner(m, m) - Q.topRightCorner(m, k) * lu.solve(Q.bottomLeftCorner(k, m));
  return 0.5 * (S + S.transpose());
}

LimitReport verify_limit(const MetricGraph& g, const TargetSpec& spec, const KroneckerSequence& seq) {
  if (g.inner_count() != 0) throw Error(ErrorCode::PreconditionFailed, "every vertex must be outer");
  const MatrixXd Q = limit_matrix_Q(g.topology(), spec);
  LimitReport rep;
  for (const auto& st : seq.steps) {
    try {
      const DtnMatrix d = assemble_full(g, st.lambda);
      const double scale = st.ell * std::sqrt(st.lambda);
      rep.errors.push_back((d.entries / scale - Q).cwiseAbs().maxCoeff());
      rep.ells.push_back(st.ell);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AtPole) throw;
      rep.skipped_at_pole.push_back(st.ell);
    }
  }
  if (!rep.errors.empty()) {
    rep.initial_error = rep.errors.front();
    rep.final_error = rep.errors.back();
    rep.decreasing = rep.errors.size() > 1 && rep.final_error < rep.initial_error;
  }
  return rep;
}

namespace {

FoundLambda search_for(const MetricGraph& g, double lambda_hat, const FindOptions& opts,
                       const std::vector<std::pair<TargetSpec, std::string>>& candidates, Verdict wanted) {
  const std::vector<double> L = g.lengths();
  if (L.size() > 1 && !opts.search.assert_independent)
    throw Error(ErrorCode::IndependenceNotAsserted, "rational independence of the edge lengths must be asserted");
  const long double mu_floor = std::max<long double>(opts.search.mu_start, lambda_hat > 0 ? std::sqrt(static_cast<long double>(lambda_hat)) : 0.0L);
  std::uint64_t used = 0;
  for (const auto& [spec, name] : candidates) {
    long double mu = mu_floor;
    for (int l = 1; l <= opts.max_ell && used < opts.search.budget; ++l) {
      auto st = kronecker_step(L, spec, l, mu, opts.search, used);
      if (!st) continue;
      mu = st->mu;
      if (!(st->lambda > lambda_hat)) continue;
      SemigroupClass cls;
      try {
        cls = classify(assemble_outer(g, st->lambda).entries, opts.classifier);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::AtPole && e.code() != ErrorCode::InnerBlockSingular) throw;
        continue;
      }
      if (cls.verdict == wanted) {
        FoundLambda f;
        f.lambda = st->lambda;
        f.classification = std::move(cls);
        f.ell = l;
        f.sin_residual = st->sin_residual;
        f.cos_residual = st->cos_residual;
        f.budget_used = used;
        f.targets = spec;
        f.construction = name;
        return f;
      }
    }
    if (used >= opts.search.budget) break;
  }
  throw Error(ErrorCode::BudgetExhausted,
              "no lambda with verdict '" + to_string(wanted) + "' found after " + std::to_string(used) + " points");
}

double min_positive_off_diagonal(const MatrixXd& A) {
  double best = std::numeric_limits<double>::infinity();
  for (EIdx i = 0; i < A.rows(); ++i)
    for (EIdx j = 0; j < A.cols(); ++j)
      if (i != j && A(i, j) > 1e-12) best = std::min(best, A(i, j));
  return best;
}

}  // namespace

FoundLambda find_strongly_positive_above(const MetricGraph& g, double lambda_hat, const FindOptions& opts) {
  return search_for(g, lambda_hat, opts, {{uniform_targets(g.edges().size(), 1.0), "gamma=1"}}, Verdict::Strong);
}

FoundLambda find_not_eventually_positive_above(const MetricGraph& g, double lambda_hat, const FindOptions& opts) {
  if (g.outer_count() < 2)
    throw Error(ErrorCode::PreconditionFailed, "a one-dimensional semigroup is always strongly positive");
  return search_for(g, lambda_hat, opts, {{uniform_targets(g.edges().size(), -1.0), "gamma=-1"}}, Verdict::None);
}

std::vector<EventualCandidate> eventual_candidates(const MetricGraph& g, const ClassifierConfig& cfg) {
  const ReducedGraph R = reduced_graph(g);
  const SimpleGraph rt = R.topology();
  if (!has_cycle(rt)) throw Error(ErrorCode::NoCycle, "the reduced graph is a tree");

  const auto m = static_cast<EIdx>(g.outer_count());
  const EIdx k = static_cast<EIdx>(g.inner_count());
  const MatrixXd LG = graph_laplacian(g.topology()).cast<double>();
  MatrixXd through = MatrixXd::Zero(m, m);  // B^T (-C)^{-1} B from the inner blocks of L_G
  if (k > 0) {
    const MatrixXd B = LG.bottomLeftCorner(k, m);
    const MatrixXd C = LG.bottomRightCorner(k, k);
    through = B.transpose() * (-C).ldlt().solve(B);
  }

  std::vector<std::size_t> cyc = cycle_edges(rt);
  std::stable_partition(cyc.begin(), cyc.end(), [&](std::size_t i) { return R.edges[i].kind != ReducedEdgeKind::ThroughInner; });

  auto edge_index = [&](Index a, Index b) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < g.edges().size(); ++i) {
      const auto& e = g.edges()[i];
      if ((e.u == a && e.v == b) || (e.u == b && e.v == a)) return i;
    }
    return std::nullopt;
  };
  auto limit_class = [&](const TargetSpec& spec) -> std::optional<SemigroupClass> {
    try {
      return classify(limit_matrix_outer(g, spec), cfg);
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  std::vector<EventualCandidate> direct, flips;
  const std::size_t ne = g.edges().size();
  for (std::size_t ri : cyc) {
    const ReducedEdge& re = R.edges[ri];
    const std::string pair = g.names()[re.r] + "-" + g.names()[re.s];
    if (re.kind != ReducedEdgeKind::ThroughInner && direct.size() < 3) {
      const std::size_t e = *edge_index(re.r, re.s);
      const double c = through(static_cast<EIdx>(re.r), static_cast<EIdx>(re.s));
      TargetSpec spec = uniform_targets(ne, 1.0);
      spec[e] = c > 0 ? Target::finite(-1.0 / c) : Target::plus_infinity();
      const double m0 = min_positive_off_diagonal(-limit_matrix_outer(g, spec));
      if (!std::isfinite(m0)) continue;
      for (int j = 2; j <= 12 && direct.size() < 3; ++j) {
        const double eps = std::ldexp(m0, -j);
        spec[e] = Target::finite(-1.0 / (eps + c));
        auto cls = limit_class(spec);
        if (cls && cls->verdict == Verdict::Eventual)
          direct.push_back({spec, "cycle edge " + pair + ", eps=" + std::to_string(eps), *cls});
      }
    } else if (re.kind == ReducedEdgeKind::ThroughInner) {
      // Flip one edge linking r or s into a shared inner component.
      for (std::size_t e = 0; e < ne; ++e) {
        const auto& ed = g.edges()[e];
        const bool touches = ed.u == re.r || ed.u == re.s || ed.v == re.r || ed.v == re.s;
        const bool inner = !g.is_outer(ed.u) || !g.is_outer(ed.v);
        if (!touches || !inner) continue;
        for (int j = -4; j <= 6; ++j) {
          const double t = std::pow(2.0, j + 0.5);
          TargetSpec spec = uniform_targets(ne, 1.0);
          spec[e] = Target::finite(-1.0 / t);
          auto cls = limit_class(spec);
          if (cls && cls->verdict == Verdict::Eventual)
            flips.push_back({spec,
                             "through " + pair + ", edge " + g.names()[ed.u] + "-" + g.names()[ed.v] +
                                 " weight -" + std::to_string(t),
                             *cls});
        }
      }
    }
  }
  std::stable_sort(flips.begin(), flips.end(), [](const EventualCandidate& a, const EventualCandidate& b) {
    return a.limit_class.evidence.robustness > b.limit_class.evidence.robustness;
  });
  if (flips.size() > 4) flips.resize(4);
  direct.insert(direct.end(), flips.begin(), flips.end());
  return direct;
}

FoundLambda find_eventual_not_positive_above(const MetricGraph& g, double lambda_hat, const FindOptions& opts) {
  std::vector<std::pair<TargetSpec, std::string>> cands;
  for (auto& c : eventual_candidates(g, opts.classifier)) cands.emplace_back(std::move(c.targets), std::move(c.construction));
  if (cands.empty()) throw Error(ErrorCode::BudgetExhausted, "no target construction has an eventual limit");
  return search_for(g, lambda_hat, opts, cands, Verdict::Eventual);
}

Commensurability detect_commensurable(const std::vector<double>& L) {
  if (L.empty()) throw Error(ErrorCode::InvalidArgument, "no lengths");
  long long den = 1;
  for (double x : L) {
    const auto r = rational_relation(static_cast<long double>(x) / L[0], 1e-9L);
    if (!r) throw Error(ErrorCode::NotCommensurable, "length " + std::to_string(x) + " is not a rational multiple of " + std::to_string(L[0]));
    den = std::lcm(den, r->second);
    if (den > 1000000) throw Error(ErrorCode::NotCommensurable, "common denominator too large");
  }
  Commensurability c;
  double base = L[0] / static_cast<double>(den);
  long long g = 0;
  for (double x : L) {
    const long long n = std::llround(x / base);
    if (n <= 0 || std::abs(x - n * base) > 1e-9 * x) throw Error(ErrorCode::NotCommensurable, "inconsistent multiples");
    c.multiples.push_back(n);
    g = std::gcd(g, n);
  }
  for (auto& n : c.multiples) n /= g;
  c.base = base * static_cast<double>(g);
  return c;
}

CommensurableFamily commensurable_family(const MetricGraph& g, double mu, const std::vector<long long>& p_list,
                                         const ClassifierConfig& cfg) {
  CommensurableFamily fam;
  fam.lengths = detect_commensurable(g.lengths());
  fam.mu = mu;
  fam.lambda1 = lambda1_outer(g);
  if (!(mu > 0.0) || !(mu < fam.lambda1))
    throw Error(ErrorCode::MuOutOfRange, "mu=" + std::to_string(mu) + " outside (0, " + std::to_string(fam.lambda1) + ")");
  const MatrixXd ref = assemble_outer(g, mu).entries / std::sqrt(mu);
  for (long long p : p_list) {
    if (p < 0) throw Error(ErrorCode::InvalidArgument, "p must be non-negative");
    CommensurableMember mem;
    mem.p = p;
    mem.lambda = std::pow(std::sqrt(mu) + 2.0 * std::numbers::pi * static_cast<double>(p) / fam.lengths.base, 2);
    const MatrixXd D = assemble_outer(g, mem.lambda).entries;
    const MatrixXd scaled = D / std::sqrt(mem.lambda);
    for (EIdx i = 0; i < D.rows(); ++i)
      for (EIdx j = 0; j < D.cols(); ++j) {
        const double denom = std::max(std::abs(ref(i, j)), std::abs(scaled(i, j)));
        if (denom > 0) mem.scaling_error = std::max(mem.scaling_error, std::abs(scaled(i, j) - ref(i, j)) / denom);
      }
    mem.classification = classify(D, cfg);
    fam.members.push_back(std::move(mem));
  }
  return fam;
}

}  // namespace qgdtn
