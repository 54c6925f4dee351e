#pragma once

#include <vector>

namespace qtt {

/// Gauss-Legendre rule mapped to [0,1); exact for polynomials of degree <= 2*order - 1.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;

    int order() const noexcept { return static_cast<int>(nodes.size()); }
};

/// Nodes and weights by Newton iteration on P_order. Results are cached per order.
const GaussRule& gauss_legendre(int order);

}  // namespace qtt
