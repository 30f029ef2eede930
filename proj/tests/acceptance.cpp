// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Criteria cover the phase transition of the single-letter
// formula, its limits and identities, AMP against state evolution at
// n = 20000, the spectral baseline, and the exact small-n oracle.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "sbminfo/amp.hpp"
#include "sbminfo/fixed_point.hpp"
#include "sbminfo/models.hpp"
#include "sbminfo/oracle.hpp"
#include "sbminfo/scalar_channel.hpp"

using namespace sbminfo;

namespace {

constexpr double kLog2 = 0.6931471805599453;

const QuadratureRule& rule61() {
    static const QuadratureRule rule = gauss_hermite(61);
    return rule;
}

struct Reporter {
    int failures = 0;

    void run(int id, const std::string& name, const std::function<bool(std::string&)>& body) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = false;
        try {
            ok = body(detail);
        } catch (const std::exception& err) {
            detail = std::string("exception: ") + err.what();
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        std::printf("%s criterion %2d [%s] (%.1fs)%s%s\n", ok ? "PASS" : "FAIL", id,
                    name.c_str(), secs, detail.empty() ? "" : " — ", detail.c_str());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

bool criterion1_phase_transition(std::string& detail) {
    for (double lambda : {0.25, 0.5, 0.75, 1.0}) {
        const FixedPointSolution sol = solve_gamma_star(lambda, 0.0, rule61());
        if (!(std::fabs(sol.gamma_star) <= 1e-9 &&
              std::fabs(sol.psi - lambda / 4.0) <= 1e-9)) {
            detail = "subcritical failure at lambda=" + std::to_string(lambda);
            return false;
        }
    }
    for (double lambda : {1.5, 2.0, 4.0}) {
        const FixedPointSolution sol = solve_gamma_star(lambda, 0.0, rule61());
        if (!(sol.gamma_star > 1e-3 && sol.psi < lambda / 4.0 - 1e-4)) {
            detail = "supercritical failure at lambda=" + std::to_string(lambda);
            return false;
        }
    }
    return true;
}

bool criterion2_limits(std::string& detail) {
    const FixedPointSolution big = solve_gamma_star(50.0, 0.0, rule61());
    if (std::fabs(big.psi - kLog2) >= 1e-2) {
        detail = "psi(50) = " + std::to_string(big.psi);
        return false;
    }
    const FixedPointSolution tiny = solve_gamma_star(1e-4, 0.2, rule61());
    if (std::fabs(tiny.psi - 0.2 * kLog2) >= 1e-4) {
        detail = "psi(1e-4, 0.2) = " + std::to_string(tiny.psi);
        return false;
    }
    return true;
}

bool criterion3_variational(std::string& detail) {
    const FixedPointSolution sol = solve_gamma_star(2.0, 0.0, rule61());
    double best = 1e300, best_gamma = 0.0;
    for (int k = 0; k <= 2000; ++k) {
        const double gamma = 1e-3 * k;
        const double value = psi(gamma, 2.0, 0.0, rule61());
        if (value < best) {
            best = value;
            best_gamma = gamma;
        }
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "argmin %.4f vs gamma* %.4f, dvalue %.2e",
                  best_gamma, sol.gamma_star, std::fabs(best - sol.psi));
    detail = buf;
    return std::fabs(best_gamma - sol.gamma_star) <= 1e-3 + 1e-12 &&
           std::fabs(best - sol.psi) < 1e-6;
}

bool criterion4_immse_scalar(std::string& detail) {
    for (double gamma : {0.5, 1.0, 2.0, 5.0}) {
        const double h = 1e-3;
        const double fd =
            (mi_scalar(gamma + h, rule61()) - mi_scalar(gamma - h, rule61())) /
            (2.0 * h);
        const double residual = std::fabs(fd - 0.5 * mmse_scalar(gamma, rule61()));
        if (residual >= 1e-6) {
            detail = "residual " + std::to_string(residual) + " at gamma=" +
                     std::to_string(gamma);
            return false;
        }
    }
    return true;
}

bool criterion5_g_identities(std::string& detail) {
    std::vector<double> g(500);
    for (int k = 0; k < 500; ++k)
        g[k] = g_overlap(50.0 * k / 499.0, rule61());
    for (int k = 1; k + 1 < 500; ++k)
        if (g[k + 1] - 2.0 * g[k] + g[k - 1] > 1e-9) {
            detail = "concavity violated at grid index " + std::to_string(k);
            return false;
        }
    for (double gamma : {0.5, 1.0, 2.0, 5.0}) {
        const double h = 1e-3;
        const double fd =
            (g_overlap(gamma + h, rule61()) - g_overlap(gamma - h, rule61())) /
            (2.0 * h);
        const double sech4 = channel_output_expect(gamma, [](double v) {
            const double c = std::cosh(v);
            return 1.0 / (c * c * c * c);
        });
        if (std::fabs(fd - sech4) >= 1e-6) {
            detail = "G' identity fails at gamma=" + std::to_string(gamma);
            return false;
        }
    }
    for (double gamma : {0.5, 2.0}) {
        for (int k : {1, 2, 3}) {
            const double odd = tanh_power_moment(gamma, 2 * k - 1, rule61());
            const double even = tanh_power_moment(gamma, 2 * k, rule61());
            if (std::fabs(odd - even) >= 1e-8) {
                detail = "power identity fails at gamma=" + std::to_string(gamma) +
                         " k=" + std::to_string(k);
                return false;
            }
        }
    }
    return true;
}

bool criterion6_amp_vs_se(std::string& detail) {
    const int n = 20000, T = 8, seeds = 10;
    const double lambda = 4.0, eps = 0.05;
    std::vector<double> overlap_dev(T, 0.0), mse_dev(T, 0.0);
    AmpOptions opts;
    opts.store_vectors = false;
    for (int s = 0; s < seeds; ++s) {
        const SpikedInstance inst = sample_spiked(n, lambda, 7000 + s);
        const SideInfo side = sample_side_info(inst.labels, eps, 7000 + s);
        const AmpTrajectory traj =
            amp_run(inst.y, side, lambda, T, inst.labels, rule61(), opts);
        for (int t = 0; t < T; ++t) {
            overlap_dev[t] += std::fabs(traj.steps[t].empirical_overlap -
                                        traj.steps[t].se_overlap);
            mse_dev[t] +=
                std::fabs(traj.steps[t].empirical_mse - traj.steps[t].se_mse);
        }
    }
    double worst_overlap = 0.0, worst_mse = 0.0;
    for (int t = 0; t < T; ++t) {
        worst_overlap = std::max(worst_overlap, overlap_dev[t] / seeds);
        worst_mse = std::max(worst_mse, mse_dev[t] / seeds);
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "max mean dev: overlap %.4f, mse %.4f",
                  worst_overlap, worst_mse);
    detail = buf;
    return worst_overlap < 0.01 && worst_mse < 0.02;
}

bool criterion7_mmse_limit(std::string& detail) {
    const int n = 20000, T = 25;
    const double eps = 0.05;
    AmpOptions opts;
    opts.store_vectors = false;
    char buf[160];
    std::string acc;
    for (double lambda : {2.0, 4.0}) {
        const SpikedInstance inst = sample_spiked(n, lambda, 8100 + (int)lambda);
        const SideInfo side = sample_side_info(inst.labels, eps, 8100 + (int)lambda);
        const AmpTrajectory traj =
            amp_run(inst.y, side, lambda, T, inst.labels, rule61(), opts);
        const FixedPointSolution sol = solve_gamma_star(lambda, eps, rule61());
        const double ratio = sol.gamma_star / lambda;
        const double predicted = 1.0 - ratio * ratio;
        const double final_mse = traj.steps.back().empirical_mse;
        std::snprintf(buf, sizeof(buf), "lambda=%.0f mse %.4f vs %.4f; ", lambda,
                      final_mse, predicted);
        acc += buf;
        if (std::fabs(final_mse - predicted) >= 0.02) {
            detail = acc;
            return false;
        }
    }
    const SpikedInstance inst = sample_spiked(n, 0.5, 8200);
    const SideInfo side = sample_side_info(inst.labels, eps, 8200);
    const AmpTrajectory traj =
        amp_run(inst.y, side, 0.5, T, inst.labels, rule61(), opts);
    const double final_mse = traj.steps.back().empirical_mse;
    std::snprintf(buf, sizeof(buf), "lambda=0.5 mse %.4f", final_mse);
    acc += buf;
    detail = acc;
    return final_mse > 0.9;
}

bool criterion8_spectral(std::string& detail) {
    const int n = 4000, seeds = 10;
    double mean_overlap = 0.0;
    for (int s = 0; s < seeds; ++s) {
        const SpikedInstance inst = sample_spiked(n, 4.0, 9000 + s);
        const SpectralResult res = spectral_estimate(inst.y, 5000, 1e-8, 9000 + s);
        mean_overlap +=
            std::fabs(res.eigenvector.dot(inst.labels.cast<double>())) / std::sqrt(n);
    }
    mean_overlap /= seeds;
    const double target = std::sqrt(1.0 - 1.0 / 4.0);
    char buf[96];
    std::snprintf(buf, sizeof(buf), "mean overlap %.4f vs %.4f", mean_overlap, target);
    detail = buf;
    return std::fabs(mean_overlap - target) < 0.05;
}

bool criterion9_oracle_identities(std::string& detail) {
    // Elementary bound, 5-point lambda grid at n = 12.
    const int n = 12;
    for (int k = 1; k <= 5; ++k) {
        const double lambda = 0.5 * k;
        const MonteCarloEstimate est = exact_mi_gauss(n, lambda, 0.0, 800, 110 + k);
        if (est.value > lambda / 4.0 + 1.0 / n + 3.0 * est.std_error) {
            detail = "elementary bound fails at lambda=" + std::to_string(lambda);
            return false;
        }
    }
    // I-MMSE finite difference at n = 10.
    const MonteCarloEstimate res = immse_check(10, 2.0, 0.05, 0.1, 2000, 120);
    if (std::fabs(res.value) >= 0.01 + 3.0 * res.std_error) {
        detail = "immse residual " + std::to_string(res.value) + " stderr " +
                 std::to_string(res.std_error);
        return false;
    }
    // Metric sandwich on 500 enumerated instances at n = 10, lambda = 4.
    for (int k = 0; k < 500; ++k) {
        const SpikedInstance inst = sample_spiked(10, 4.0, 130000 + k);
        ExactPosterior post = exact_posterior(inst);
        post.normalize();
        const MetricsReport rep = metrics_from_posterior(post, inst.labels);
        const bool ok =
            rep.vmmse <= rep.mmse_matrix + 1e-9 &&
            1.0 - std::sqrt(1.0 - (1.0 - 0.1) * rep.mmse_matrix) <= rep.vmmse + 1e-9 &&
            rep.overlap_lb >= 1.0 - rep.vmmse - 5.0 / std::sqrt(10.0);
        if (!ok) {
            detail = "metric sandwich fails on instance " + std::to_string(k);
            return false;
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "immse residual %.4f (se %.4f)", res.value,
                  res.std_error);
    detail = buf;
    return true;
}

bool criterion10_universality(std::string& detail) {
    // pbar = 0.05 is infeasible at n = 12, lambda = 1 (it would force q < 0);
    // pbar = 0.1 is the sparse end the parametrization admits, and it carries
    // a pilot-frozen gap bound instead of the 0.05 budget of the unreachable
    // point (see fixtures.hpp).
    const std::vector<UniversalityGap> gaps = universality_gap(
        12, 1.0, {0.5, fixtures::kUniversalitySparsePbar}, 20000, 140);
    const double combined = std::sqrt(gaps[0].std_error * gaps[0].std_error +
                                      gaps[1].std_error * gaps[1].std_error);
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "gap(0.5)=%.4f < 0.05, gap(%.2f)=%.4f < %.3f (se %.4f)",
                  gaps[0].gap, gaps[1].pbar, gaps[1].gap,
                  fixtures::kUniversalitySparseGapBound, combined);
    detail = buf;
    return gaps[0].gap <= gaps[1].gap + 3.0 * combined && gaps[0].gap < 0.05 &&
           gaps[1].gap < fixtures::kUniversalitySparseGapBound;
}

bool criterion11_psi_integral(std::string& detail) {
    const struct {
        double lambda, eps;
    } cases[] = {{0.5, 0.2}, {2.0, 0.1}, {4.0, 0.05}};
    for (const auto& c : cases) {
        const double residual = psi_integral_check(c.lambda, c.eps, rule61(), 400);
        if (residual >= 1e-4) {
            detail = "residual " + std::to_string(residual) + " at lambda=" +
                     std::to_string(c.lambda);
            return false;
        }
    }
    return true;
}

bool criterion12_theta_derivative(std::string& detail) {
    char buf[64];
    std::string acc;
    for (int seed : {1, 2, 3}) {
        const ThetaDerivativeCheck check =
            sbm_theta_derivative_check(10, 1.0, 0.05, 0.5, 2000, seed);
        const double bound = fixtures::kThetaDerivativeCFix * check.bound_scale +
                             3.0 * check.std_error;
        std::snprintf(buf, sizeof(buf), "seed %d: %.4f/%.4f; ", seed, check.residual,
                      bound);
        acc += buf;
        if (std::fabs(check.residual) > bound) {
            detail = acc;
            return false;
        }
    }
    detail = acc;
    return true;
}

}  // namespace

int main() {
    Reporter reporter;
    reporter.run(1, "phase transition of Psi", criterion1_phase_transition);
    reporter.run(2, "limits of Psi", criterion2_limits);
    reporter.run(3, "variational characterization", criterion3_variational);
    reporter.run(4, "scalar I-MMSE", criterion4_immse_scalar);
    reporter.run(5, "G-function identities", criterion5_g_identities);
    reporter.run(6, "AMP vs state evolution", criterion6_amp_vs_se);
    reporter.run(7, "matrix MMSE limit at t=25", criterion7_mmse_limit);
    reporter.run(8, "spectral baseline", criterion8_spectral);
    reporter.run(9, "exact-oracle identities", criterion9_oracle_identities);
    reporter.run(10, "universality trend", criterion10_universality);
    reporter.run(11, "Psi integral identity", criterion11_psi_integral);
    reporter.run(12, "theta derivative check", criterion12_theta_derivative);

    if (reporter.failures == 0) {
        std::printf("all acceptance criteria passed\n");
        return 0;
    }
    std::printf("%d acceptance criteria failed\n", reporter.failures);
    return 1;
}
