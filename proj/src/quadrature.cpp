#include "sbminfo/quadrature.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "sbminfo/errors.hpp"

namespace sbminfo {

QuadratureRule gauss_hermite(int order) {
    if (order < 1 || order > 200)
        throw parameter_error("gauss_hermite: order must be in [1, 200], got " +
                              std::to_string(order));

    QuadratureRule rule;
    rule.order = order;
    rule.nodes.resize(order);
    rule.weights.resize(order);

    if (order == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 1.0;
        return rule;
    }

    // Jacobi matrix of the monic Hermite_e recurrence: zero diagonal,
    // off-diagonal sqrt(k). Eigenvalues are the nodes in N(0,1) weighting;
    // the squared first eigenvector components are the weights (they sum to
    // one exactly because the eigenvector matrix is orthonormal).
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(order);
    Eigen::VectorXd sub(order - 1);
    for (int k = 1; k < order; ++k) sub[k - 1] = std::sqrt(static_cast<double>(k));

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success)
        throw numeric_error("gauss_hermite: tridiagonal eigensolver failed");

    for (int k = 0; k < order; ++k) {
        rule.nodes[k] = solver.eigenvalues()[k];
        const double v0 = solver.eigenvectors()(0, k);
        rule.weights[k] = v0 * v0;
    }

    // Enforce the exact symmetry of the rule; the eigensolver output is
    // already symmetric to roundoff, averaging makes it bit-exact.
    for (int k = 0; k < order / 2; ++k) {
        const int j = order - 1 - k;
        const double node = 0.5 * (rule.nodes[j] - rule.nodes[k]);
        rule.nodes[j] = node;
        rule.nodes[k] = -node;
        const double w = 0.5 * (rule.weights[k] + rule.weights[j]);
        rule.weights[k] = w;
        rule.weights[j] = w;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;

    return rule;
}

}  // namespace sbminfo
