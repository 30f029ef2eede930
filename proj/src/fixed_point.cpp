#include "sbminfo/fixed_point.hpp"

#include <cmath>
#include <string>

#include "sbminfo/errors.hpp"
#include "sbminfo/scalar_channel.hpp"

namespace sbminfo {

namespace {

constexpr double kLog2 = 0.6931471805599453;

void check_lambda(double lambda, const char* who) {
    if (!(lambda > 0.0))
        throw parameter_error(std::string(who) + ": lambda must be > 0, got " +
                              std::to_string(lambda));
}

void check_eps(double eps, const char* who) {
    if (!(eps >= 0.0 && eps <= 1.0))
        throw parameter_error(std::string(who) + ": eps must be in [0, 1], got " +
                              std::to_string(eps));
}

double update(double gamma, double lambda, double eps, const QuadratureRule& rule) {
    return lambda * (1.0 - (1.0 - eps) * mmse_scalar(gamma, rule));
}

// Bisection on h(gamma) = gamma - lambda*(1-(1-eps)*mmse(gamma)) over
// [lo, hi], assuming h(lo) < 0 <= h(hi).
double bisect_root(double lo, double hi, double lambda, double eps,
                   const QuadratureRule& rule, double tol, long max_iter,
                   long* iters) {
    for (long t = 0; t < max_iter && hi - lo > tol; ++t) {
        ++*iters;
        const double mid = 0.5 * (lo + hi);
        const double h = mid - update(mid, lambda, eps, rule);
        if (h < 0.0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double psi(double gamma, double lambda, double eps, const QuadratureRule& rule) {
    check_lambda(lambda, "psi");
    check_eps(eps, "psi");
    if (!(gamma >= 0.0))
        throw parameter_error("psi: gamma must be >= 0, got " + std::to_string(gamma));
    return lambda / 4.0 + gamma * gamma / (4.0 * lambda) - gamma / 2.0 +
           eps * kLog2 + (1.0 - eps) * mi_scalar(gamma, rule);
}

FixedPointSolution solve_gamma_star(double lambda, double eps,
                                    const QuadratureRule& rule, SolverOptions opts) {
    check_lambda(lambda, "solve_gamma_star");
    check_eps(eps, "solve_gamma_star");
    if (!(opts.tol > 0.0))
        throw parameter_error("solve_gamma_star: tol must be > 0");

    FixedPointSolution sol;
    sol.lambda = lambda;
    sol.eps = eps;
    sol.near_critical = (eps == 0.0 && std::fabs(lambda - 1.0) < 1e-3);

    double gamma = lambda;
    bool step_converged = false;
    for (long t = 0; t < opts.max_iter; ++t) {
        const double next = update(gamma, lambda, eps, rule);
        ++sol.iterations;
        if (std::fabs(next - gamma) < opts.tol) {
            gamma = next;
            step_converged = true;
            break;
        }
        gamma = next;
    }
    const bool stalled = !step_converged || sol.near_critical;

    // The iteration decreases to the largest fixed point but slows down
    // algebraically when the map's slope at the root approaches 1 (lambda
    // near 1 at eps = 0), leaving the iterate stuck on a slow crawl toward 0.
    // h(g) = g - lambda*(1-(1-eps)*mmse(g)) is convex with h(0) = -lambda*eps,
    // so for eps = 0 a positive root exists iff h dips negative right of 0:
    // probing just above 0 decides between the trivial root and bisection.
    if (eps == 0.0) {
        const double probe = std::min(1e-9, opts.tol);
        const double h_probe = probe - update(probe, lambda, eps, rule);
        if (h_probe >= 0.0) {
            gamma = 0.0;  // largest nonnegative root is the trivial one
            sol.used_bisection = stalled;
        } else if (stalled) {
            gamma = bisect_root(probe, lambda, lambda, eps, rule, opts.tol,
                                opts.max_iter, &sol.iterations);
            sol.used_bisection = true;
        }
    } else if (stalled) {
        // eps > 0: the root is strictly positive and h(tiny) < 0.
        gamma = bisect_root(std::min(1e-9, opts.tol), lambda, lambda, eps, rule,
                            opts.tol, opts.max_iter, &sol.iterations);
        sol.used_bisection = true;
    }

    sol.gamma_star = gamma;
    sol.residual = std::fabs(gamma - update(gamma, lambda, eps, rule));
    sol.psi = psi(gamma, lambda, eps, rule);

    // Step convergence and bisection both bound the error by tol; anything
    // else means the budget was exhausted with an unusable iterate.
    const double residual_allowance = (sol.used_bisection ? 4.0 : 1.0) * opts.tol +
                                      1e-11 * lambda;
    if (sol.residual > residual_allowance)
        throw convergence_error(
            "solve_gamma_star: no convergence at lambda=" + std::to_string(lambda) +
                " eps=" + std::to_string(eps),
            gamma, sol.residual, sol.iterations);
    return sol;
}

SETrajectory se_trajectory(double lambda, double eps, int iterations,
                           const QuadratureRule& rule) {
    check_lambda(lambda, "se_trajectory");
    check_eps(eps, "se_trajectory");
    if (iterations < 1)
        throw parameter_error("se_trajectory: need at least one iteration");

    SETrajectory traj;
    traj.lambda = lambda;
    traj.eps = eps;
    const double sqrt_lambda = std::sqrt(lambda);
    traj.gammas.reserve(iterations + 1);
    double gamma = 0.0;
    traj.gammas.push_back(gamma);
    for (int t = 0; t < iterations; ++t) {
        const double next = update(gamma, lambda, eps, rule);
        traj.converged = std::fabs(next - gamma) < 1e-10;
        gamma = next;
        traj.gammas.push_back(gamma);
    }
    traj.mus.reserve(traj.gammas.size());
    traj.sigmas2.reserve(traj.gammas.size());
    for (double g : traj.gammas) {
        traj.mus.push_back(g / sqrt_lambda);
        traj.sigmas2.push_back(g / lambda);
    }
    return traj;
}

double limit_mmse_matrix(double lambda, const QuadratureRule& rule, SolverOptions opts) {
    const FixedPointSolution sol = solve_gamma_star(lambda, 0.0, rule, opts);
    const double ratio = sol.gamma_star / lambda;
    return 1.0 - ratio * ratio;
}

double psi_integral_check(double lambda, double eps, const QuadratureRule& rule,
                          int n_panels, SolverOptions opts) {
    check_lambda(lambda, "psi_integral_check");
    if (!(eps > 0.0 && eps <= 1.0))
        throw parameter_error("psi_integral_check: eps must be in (0, 1]");
    if (n_panels < 1)
        throw parameter_error("psi_integral_check: n_panels must be >= 1");

    auto integrand = [&](double u) {
        if (u == 0.0) return 1.0 - eps * eps;  // gamma*(u,eps)/u -> eps as u -> 0
        const double g = solve_gamma_star(u, eps, rule, opts).gamma_star;
        const double r = g / u;
        return 1.0 - r * r;
    };

    // Composite Simpson: each panel contributes (h/6)(f(a) + 4 f(m) + f(b)).
    const double h = lambda / n_panels;
    double integral = 0.0;
    double left = integrand(0.0);
    for (int k = 0; k < n_panels; ++k) {
        const double a = k * h;
        const double b = (k + 1) * h;
        const double mid = integrand(0.5 * (a + b));
        const double right = integrand(b);
        integral += (h / 6.0) * (left + 4.0 * mid + right);
        left = right;
    }

    const FixedPointSolution sol = solve_gamma_star(lambda, eps, rule, opts);
    return std::fabs(sol.psi - eps * kLog2 - 0.25 * integral);
}

}  // namespace sbminfo
