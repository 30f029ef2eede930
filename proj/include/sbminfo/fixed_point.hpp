#pragma once

#include <vector>

#include "sbminfo/quadrature.hpp"

namespace sbminfo {

// Solution of the effective-SNR equation gamma = lambda*(1 - (1-eps)*mmse(gamma))
// together with the potential value at the solution.
struct FixedPointSolution {
    double lambda = 0.0;
    double eps = 0.0;
    double gamma_star = 0.0;
    double psi = 0.0;           // nats per vertex
    long iterations = 0;
    double residual = 0.0;      // |gamma* - lambda*(1-(1-eps)*mmse(gamma*))|
    bool used_bisection = false;
    bool near_critical = false; // |lambda - 1| < 1e-3 at eps = 0: expect slow convergence
};

struct SolverOptions {
    double tol = 1e-12;
    long max_iter = 100000;
};

// The potential
//   Psi(gamma, lambda, eps) =
//     lambda/4 + gamma^2/(4 lambda) - gamma/2 + eps*log 2 + (1-eps)*I(gamma).
// Its value at gamma_star is the asymptotic per-vertex mutual information.
double psi(double gamma, double lambda, double eps, const QuadratureRule& rule);

// Largest nonnegative solution of the fixed-point equation. Iterates
// gamma <- lambda*(1-(1-eps)*mmse(gamma)) from gamma = lambda; the iterates
// decrease monotonically to the largest root. Near the critical point the
// iteration slows down algebraically and a bisection fallback takes over.
FixedPointSolution solve_gamma_star(double lambda, double eps,
                                    const QuadratureRule& rule,
                                    SolverOptions opts = {});

// One-dimensional state evolution gamma_{t+1} = lambda*(1-(1-eps)*mmse(gamma_t))
// from gamma_0 = 0, with the derived AMP calibration mu_t = gamma_t/sqrt(lambda),
// sigma_t^2 = gamma_t/lambda.
struct SETrajectory {
    double lambda = 0.0;
    double eps = 0.0;
    std::vector<double> gammas;   // gamma_0 .. gamma_T
    std::vector<double> mus;
    std::vector<double> sigmas2;
    bool converged = false;       // last step moved < 1e-10
};

SETrajectory se_trajectory(double lambda, double eps, int iterations,
                           const QuadratureRule& rule);

// Asymptotic matrix MMSE, 1 - (gamma_star(lambda, 0)/lambda)^2.
double limit_mmse_matrix(double lambda, const QuadratureRule& rule,
                         SolverOptions opts = {});

// Residual of the integral identity
//   Psi(gamma*(lambda,eps), lambda, eps)
//     = eps*log 2 + (1/4) * int_0^lambda (1 - gamma*(u,eps)^2/u^2) du,
// with the integral by composite Simpson over n_panels panels. The integrand
// has a removable singularity at u = 0 where it equals 1 - eps^2.
double psi_integral_check(double lambda, double eps, const QuadratureRule& rule,
                          int n_panels, SolverOptions opts = {});

}  // namespace sbminfo
