#pragma once

#include <Eigen/Dense>

namespace qgdtn {

/// e^A by Taylor expansion with scaling and squaring.
Eigen::MatrixXd expm(const Eigen::MatrixXd& A);

/// e^A / c for some c > 0, with log(c) returned in log_scale. After each
/// squaring the matrix is divided by its largest entry, so the result stays
/// finite for arguments whose exponential overflows. When A has non-negative
/// off-diagonal entries the diagonal is shifted away first and every term of
/// the series is non-negative, which keeps tiny positive entries positive.
Eigen::MatrixXd expm_normalized(const Eigen::MatrixXd& A, double* log_scale = nullptr);

}  // namespace qgdtn
