#pragma once

#include <vector>

namespace qgdtn::detail {

using Real = long double;
using RealMatrix = std::vector<std::vector<Real>>;  // rows are basis vectors

// LLL reduction (delta = 0.99) of the row basis, in place. Also records the
// unimodular transform U with reduced = U * original.
void lll_reduce(RealMatrix& basis, std::vector<std::vector<long long>>& transform);

// Babai nearest-plane: integer coefficients c (w.r.t. the reduced basis) with
// sum c_i b_i close to target.
std::vector<long long> babai(const RealMatrix& reduced, const std::vector<Real>& target);

}  // namespace qgdtn::detail
