#pragma once

#include <vector>

#include "poly_kernels.hpp"
#include "skewcount/polynomial.hpp"

namespace skewcount::detail {

/// Root finding on a coefficient vector of either precision. The Aberth stage
/// always runs in double; polishing, multiple-root refinement and the residual
/// check run in the precision of C.
template <class C>
RootReport find_roots_in(const std::vector<C>& coefficients, const RootOptions& options);

extern template RootReport find_roots_in<std::complex<double>>(const std::vector<std::complex<double>>&,
                                                               const RootOptions&);
extern template RootReport find_roots_in<QuadComplex>(const std::vector<QuadComplex>&, const RootOptions&);

}  // namespace skewcount::detail
