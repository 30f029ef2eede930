#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sbminfo/fixed_point.hpp"
#include "sbminfo/models.hpp"
#include "sbminfo/quadrature.hpp"

namespace sbminfo {

// Bayes-optimal denoiser f_t(y, s) for the effective channel
// y = mu_t X + sigma_t Z with erasure side information s. Revealed
// coordinates return s; erased ones return the posterior mean, which for the
// state-evolution calibration mu_t = sqrt(lambda) sigma_t^2 collapses to
// tanh(sqrt(lambda) y) for every t >= 1. At t = 0 the channel is
// uninformative (mu_0 = sigma_0 = 0) and the denoiser is 0.
double denoiser(double y, int s, double lambda, int t);

// Derivative of the denoiser in y: sqrt(lambda) * (1 - tanh^2(sqrt(lambda) y))
// on erased coordinates at t >= 1, zero on revealed coordinates and at t = 0.
double denoiser_deriv(double y, int s, double lambda, int t);

// Per-iteration record; the estimate at time t is xhat_t = f_{t-1}(x^{t-1}).
struct AmpIteration {
    int t = 0;
    double b = 0.0;  // Onsager coefficient b_t computed from x^t
    double empirical_overlap = 0.0;  // <X, xhat_t>/n
    double empirical_mse = 0.0;      // ||XX^T - xhat_t xhat_t^T||_F^2 / n^2
    double se_overlap = 0.0;         // gamma_t / lambda
    double se_mse = 0.0;             // 1 - (gamma_t/lambda)^2
    Eigen::VectorXd x;               // iterate x^t
    Eigen::VectorXd xhat;            // estimate, entries in [-1, 1]
};

struct AmpTrajectory {
    double lambda = 0.0;
    double eps = 0.0;
    int iterations = 0;
    std::vector<AmpIteration> steps;  // t = 1 .. iterations
};

struct AmpOptions {
    bool onsager = true;       // keep the memory term; false only for diagnostics
    double max_abs = 1e6;      // divergence guard on ||x^t||_inf
    bool store_vectors = true; // keep x^t / xhat_t in the trajectory
};

// Runs Bayes-optimal AMP
//   x^{t+1} = (y / sqrt(n)) f_t(x^t, side) - b_t f_{t-1}(x^{t-1}, side),
//   b_t = (1/n) sum_i f_t'(x_i^t, side_i)
// from x^0 = 0, recording empirical statistics of the estimates against the
// state-evolution predictions. `labels` enters diagnostics only.
AmpTrajectory amp_run(const Eigen::MatrixXd& y, const SideInfo& side, double lambda,
                      int iterations, const Eigen::VectorXi& labels,
                      const QuadratureRule& rule, AmpOptions opts = {});

// CSV with columns t,b_t,empirical_overlap,se_overlap,empirical_mse,se_mse.
void write_trajectory_csv(const AmpTrajectory& traj, const std::string& path);

struct SpectralResult {
    Eigen::VectorXi signs;      // coordinate-wise sign of the top eigenvector
    Eigen::VectorXd eigenvector;
    double rayleigh = 0.0;
    int iterations = 0;
};

// Deflation-free power iteration for the top eigenvector; random start from
// seed, stops when successive normalized iterates differ (up to sign) by
// less than tol. Throws convergence_error carrying the last Rayleigh
// quotient when the budget runs out.
SpectralResult spectral_estimate(const Eigen::MatrixXd& m, int max_iter, double tol,
                                 std::uint64_t seed);

}  // namespace sbminfo
