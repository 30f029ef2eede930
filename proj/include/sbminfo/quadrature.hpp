#pragma once

#include <vector>

namespace sbminfo {

// Gauss-Hermite rule expressed in standard-normal form: for a smooth f,
//   E[f(Z)] ~= sum_k weights[k] * f(nodes[k]),   Z ~ N(0,1),
// exact for polynomials of degree <= 2*order - 1. Weights sum to 1 and
// nodes are symmetric about 0. Immutable after construction.
struct QuadratureRule {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;

    // E[f(Z)] by the rule.
    template <typename F>
    double expect(F&& f) const {
        double acc = 0.0;
        for (int k = 0; k < order; ++k) acc += weights[k] * f(nodes[k]);
        return acc;
    }
};

// Builds the order-point rule via the Golub-Welsch tridiagonal eigenproblem
// for the probabilists' Hermite polynomials. 1 <= order <= 200.
QuadratureRule gauss_hermite(int order);

}  // namespace sbminfo
