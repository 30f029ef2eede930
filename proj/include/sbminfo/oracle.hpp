#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "sbminfo/models.hpp"

namespace sbminfo {

// Exhaustive posterior enumeration is limited to this many vertices.
constexpr int kMaxExactN = 14;

enum class PosteriorMode { gauss, sbm };

// Full posterior over all 2^n label vectors, log-weighted up to a constant.
// Configuration index: bit i = (1 - x_i)/2, so index 0 is the all-(+1)
// vector. Configurations conflicting with revealed side information carry
// weight zero (-inf log weight).
struct ExactPosterior {
    int n = 0;
    PosteriorMode mode = PosteriorMode::gauss;
    std::vector<double> log_weights;  // size 2^n
    bool normalized = false;
    bool sign_broken = false;  // at least one coordinate revealed

    // Subtracts the log partition sum; afterwards exp(log_weights) sums to 1.
    void normalize();

    int sign_of(std::uint32_t config, int i) const {
        return ((config >> i) & 1u) ? -1 : 1;
    }
};

// Gauss mode: log-weight(x) = sum_{i<j} sqrt(lambda/n) y_ij x_i x_j
// (constants independent of x are dropped). lambda defaults to the
// instance's own value.
ExactPosterior exact_posterior(const SpikedInstance& instance,
                               const SideInfo* side = nullptr, double lambda = -1.0);

// SBM mode: log-weight(x) =
//   sum_{i<j} [ G_ij log(pbar + delta x_i x_j)
//             + (1-G_ij) log(1 - pbar - delta x_i x_j) ].
ExactPosterior exact_posterior(const SbmInstance& instance,
                               const SideInfo* side = nullptr);

// Estimation metrics of one enumerated instance.
struct MetricsReport {
    double mmse_matrix = 0.0;     // 2/(n(n-1)) sum_{i<j} (X_i X_j - m_ij)^2
    double mmse_matrix_n2 = 0.0;  // same sum under the 2/n^2 normalization
    double vmmse = 0.0;           // min over global sign of ||X - s xhat||^2 / n
    double overlap_lb = 0.0;      // |<X, sign(xhat)>| / n
};

// xhat is the posterior mean conditioned on x_1 = +1 when the posterior is
// sign-symmetric, and the plain posterior mean once side information has
// broken the symmetry.
MetricsReport metrics_from_posterior(const ExactPosterior& posterior,
                                     const Eigen::VectorXi& labels);

struct MonteCarloEstimate {
    double value = 0.0;
    double std_error = 0.0;
    int samples = 0;
};

// Per-vertex mutual information I(X; observations)/n by Monte Carlo over
// instances of the exact log-partition identity; side information enters by
// restricting the partition sum to configurations agreeing with the
// revealed labels.
MonteCarloEstimate exact_mi_gauss(int n, double lambda, double eps, int mc_samples,
                                  std::uint64_t seed);
MonteCarloEstimate exact_mi_sbm(const SbmParams& params, double eps, int mc_samples,
                                std::uint64_t seed);

// Central finite difference of exact_mi_gauss in lambda (common random
// numbers across the two evaluations) minus (1/4) * MMSE(lambda,eps,n) in
// the 1/n^2 matrix normalization. value is the signed mean residual.
MonteCarloEstimate immse_check(int n, double lambda, double dlambda, double eps,
                               int mc_samples, std::uint64_t seed);

struct ThetaDerivativeCheck {
    double residual = 0.0;
    double std_error = 0.0;
    double bound_scale = 0.0;  // sqrt(theta / (n pbar (1-pbar)))
    int samples = 0;
};

// Central finite difference of exact_mi_sbm along the theta-parametrized
// (p, q) path minus (1/4) * MMSE_n(theta) in the pair normalization.
ThetaDerivativeCheck sbm_theta_derivative_check(int n, double theta, double dtheta,
                                                double pbar, int mc_samples,
                                                std::uint64_t seed);

struct UniversalityGap {
    double pbar = 0.0;
    double gap = 0.0;     // |I_sbm - I_gauss| / n
    double std_error = 0.0;  // of the paired per-sample difference
    double predictor = 0.0;  // lambda^{3/2} / sqrt(n pbar (1-pbar))
    double mi_sbm = 0.0;
    double mi_gauss = 0.0;
};

// MI gap between the SBM and the Gaussian model at matched lambda, one entry
// per pbar. The two models are sampled from coupled noise (u = Phi(z)) so
// the per-sample differences are low-variance.
std::vector<UniversalityGap> universality_gap(int n, double lambda,
                                              const std::vector<double>& pbar_list,
                                              int mc_samples, std::uint64_t seed);

}  // namespace sbminfo
