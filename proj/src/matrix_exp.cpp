#include "qgdtn/matrix_exp.hpp"

#include <algorithm>
#include <cmath>

namespace qgdtn {

namespace {

// Taylor series of e^X for ||X||_1 <= 1/2; 24 terms is far below double rounding.
Eigen::MatrixXd taylor(const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows();
  Eigen::MatrixXd sum = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 24; ++k) {
    term = term * X / static_cast<double>(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() <= 1e-18 * sum.cwiseAbs().maxCoeff()) break;
  }
  return sum;
}

int squarings(const Eigen::MatrixXd& X) {
  const double norm = X.cwiseAbs().colwise().sum().maxCoeff();
  if (norm <= 0.5) return 0;
  return static_cast<int>(std::ceil(std::log2(norm / 0.5)));
}

}  // namespace

Eigen::MatrixXd expm(const Eigen::MatrixXd& A) {
  const Eigen::Index n = A.rows();
  if (n == 0) return A;
  // Pull out the mean diagonal to shrink the norm.
  const double shift = A.trace() / static_cast<double>(n);
  Eigen::MatrixXd X = A - shift * Eigen::MatrixXd::Identity(n, n);
  const int s = squarings(X);
  Eigen::MatrixXd E = taylor(X / std::ldexp(1.0, s));
  for (int i = 0; i < s; ++i) E = E * E;
  return std::exp(shift) * E;
}

Eigen::MatrixXd expm_normalized(const Eigen::MatrixXd& A, double* log_scale) {
  const Eigen::Index n = A.rows();
  double logc = 0.0;
  if (n == 0) {
    if (log_scale) *log_scale = 0.0;
    return A;
  }
  const double shift = A.diagonal().minCoeff();
  Eigen::MatrixXd X = A - shift * Eigen::MatrixXd::Identity(n, n);
  logc += shift;
  const int s = squarings(X);
  const double scale = std::ldexp(1.0, s);
  Eigen::MatrixXd E = taylor(X / scale);
  double norm = E.cwiseAbs().maxCoeff();
  E /= norm;
  double log_part = std::log(norm);
  for (int i = 0; i < s; ++i) {
    E = E * E;
    log_part *= 2.0;
    norm = E.cwiseAbs().maxCoeff();
    E /= norm;
    log_part += std::log(norm);
  }
  logc += log_part;
  if (log_scale) *log_scale = logc;
  return E;
}

}  // namespace qgdtn
