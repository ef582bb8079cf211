#include "lattice.hpp"

#include <cmath>
#include <utility>

namespace qgdtn::detail {

namespace {

Real dot(const std::vector<Real>& a, const std::vector<Real>& b) {
  Real s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

void gram_schmidt(const RealMatrix& b, RealMatrix& bstar, RealMatrix& mu, std::vector<Real>& norms) {
  const std::size_t n = b.size();
  bstar = b;
  mu.assign(n, std::vector<Real>(n, 0));
  norms.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      mu[i][j] = dot(b[i], bstar[j]) / norms[j];
      for (std::size_t k = 0; k < b[i].size(); ++k) bstar[i][k] -= mu[i][j] * bstar[j][k];
    }
    norms[i] = dot(bstar[i], bstar[i]);
  }
}

}  // namespace

void lll_reduce(RealMatrix& b, std::vector<std::vector<long long>>& U) {
  const std::size_t n = b.size();
  U.assign(n, std::vector<long long>(n, 0));
  for (std::size_t i = 0; i < n; ++i) U[i][i] = 1;
  RealMatrix bstar, mu;
  std::vector<Real> norms;
  gram_schmidt(b, bstar, mu, norms);
  std::size_t k = 1;
  int guard = 0;
  while (k < n && guard++ < 100000) {
    for (std::size_t jj = k; jj-- > 0;) {
      const Real q = std::round(mu[k][jj]);
      if (q != 0) {
        for (std::size_t c = 0; c < b[k].size(); ++c) b[k][c] -= q * b[jj][c];
        for (std::size_t c = 0; c < n; ++c) U[k][c] -= static_cast<long long>(q) * U[jj][c];
        gram_schmidt(b, bstar, mu, norms);
      }
    }
    if (norms[k] >= (0.99L - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1]) {
      ++k;
    } else {
      std::swap(b[k], b[k - 1]);
      std::swap(U[k], U[k - 1]);
      gram_schmidt(b, bstar, mu, norms);
      k = k > 1 ? k - 1 : 1;
    }
  }
}

std::vector<long long> babai(const RealMatrix& b, const std::vector<Real>& target) {
  const std::size_t n = b.size();
  RealMatrix bstar, mu;
  std::vector<Real> norms;
  gram_schmidt(b, bstar, mu, norms);
  std::vector<Real> r = target;
  std::vector<long long> c(n, 0);
  for (std::size_t i = n; i-- > 0;) {
    const Real q = std::round(dot(r, bstar[i]) / norms[i]);
    c[i] = static_cast<long long>(q);
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= q * b[i][k];
  }
  return c;
}

}  // namespace qgdtn::detail
