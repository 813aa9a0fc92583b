#pragma once

#include <vector>

namespace sqg::detail {

struct GaussRule {
    std::vector<double> x;  ///< nodes on (0, 1)
    std::vector<double> w;  ///< weights summing to 1
};

/// n-point Gauss-Legendre rule mapped to (0, 1); cached per n.
const GaussRule& gauss_legendre(int n);

}  // namespace sqg::detail
