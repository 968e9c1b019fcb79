#pragma once

#include "cssel/matcore.hpp"

namespace cssel::detail {

// max_eig_pair without the finiteness and symmetry scans, for inner loops
// whose input was validated once up front. The residual check still applies.
EigPair max_eig_pair_unchecked(const Matrix& h, double tol);

}  // namespace cssel::detail
