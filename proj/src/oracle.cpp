#include "sbminfo/oracle.hpp"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include "sbminfo/errors.hpp"
#include "sbminfo/rng.hpp"

namespace sbminfo {

namespace {

constexpr double kLog2 = 0.6931471805599453;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

void check_capacity(int n, const char* who) {
    if (n < 2) throw parameter_error(std::string(who) + ": need n >= 2");
    if (n > kMaxExactN)
        throw capacity_error(std::string(who) + ": n = " + std::to_string(n) +
                             " exceeds the enumeration limit " +
                             std::to_string(kMaxExactN));
}

double pair_sum(const Eigen::MatrixXd& couplings, const Eigen::VectorXi& x) {
    const int n = static_cast<int>(x.size());
    double s = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) s += couplings(i, j) * x[i] * x[j];
    return s;
}

// Fills vals[config] = sum_{i<j} J_ij x_i x_j for every sign pattern, walking
// configurations in Gray-code order so each step flips a single spin and
// costs O(n): flipping spin b changes the sum by -2 x_b h_b with
// h_b = sum_j J_bj x_j.
void enumerate_pair_sums(const Eigen::MatrixXd& couplings, int n,
                         std::vector<double>& vals) {
    const std::size_t count = std::size_t{1} << n;
    vals.resize(count);

    Eigen::VectorXi x = Eigen::VectorXi::Ones(n);
    Eigen::VectorXd fields = couplings.rowwise().sum();  // J_bb = 0
    double s = 0.5 * fields.sum();
    vals[0] = s;

    std::uint32_t gray = 0;
    for (std::size_t k = 1; k < count; ++k) {
        const int b = std::countr_zero(k);
        const double old_xb = x[b];
        s -= 2.0 * old_xb * fields[b];
        fields -= (2.0 * old_xb) * couplings.col(b);
        x[b] = -x[b];
        gray ^= (std::uint32_t{1} << b);
        vals[gray] = s;
    }
}

// Masks describing the configurations consistent with the side information.
struct RevealMask {
    std::uint32_t care = 0;
    std::uint32_t want = 0;
    bool any = false;

    bool allows(std::uint32_t config) const { return (config & care) == want; }
};

RevealMask reveal_mask(const SideInfo* side) {
    RevealMask mask;
    if (!side) return mask;
    for (int i = 0; i < side->revealed.size(); ++i) {
        if (side->revealed[i] == 0) continue;
        mask.care |= std::uint32_t{1} << i;
        if (side->revealed[i] == -1) mask.want |= std::uint32_t{1} << i;
        mask.any = true;
    }
    return mask;
}

double log_sum_exp_masked(const std::vector<double>& vals, const RevealMask& mask) {
    double max_val = kNegInf;
    for (std::size_t idx = 0; idx < vals.size(); ++idx)
        if (mask.allows(static_cast<std::uint32_t>(idx)) && vals[idx] > max_val)
            max_val = vals[idx];
    if (max_val == kNegInf) return kNegInf;
    double acc = 0.0;
    for (std::size_t idx = 0; idx < vals.size(); ++idx)
        if (mask.allows(static_cast<std::uint32_t>(idx)))
            acc += std::exp(vals[idx] - max_val);
    return max_val + std::log(acc);
}

ExactPosterior make_posterior(const Eigen::MatrixXd& couplings, double constant,
                              int n, PosteriorMode mode, const SideInfo* side) {
    ExactPosterior post;
    post.n = n;
    post.mode = mode;
    enumerate_pair_sums(couplings, n, post.log_weights);
    for (double& w : post.log_weights) w += constant;
    const RevealMask mask = reveal_mask(side);
    if (mask.any) {
        post.sign_broken = true;
        for (std::size_t idx = 0; idx < post.log_weights.size(); ++idx)
            if (!mask.allows(static_cast<std::uint32_t>(idx)))
                post.log_weights[idx] = kNegInf;
    }
    return post;
}

// SBM couplings and constant of the Ising form of the edge log-likelihood:
// for x in {+-1}, log(c + d x) = log((c+d)(c-d))/2 + (x/2) log((c+d)/(c-d)).
struct SbmCouplingTerms {
    double j_edge, j_gap, c_edge, c_gap;  // per-pair coupling/constant by edge state
};

SbmCouplingTerms sbm_coupling_terms(const SbmParams& params) {
    const double pb = params.pbar, d = params.delta;
    if (!(params.q > 0.0 && params.p < 1.0))
        throw parameter_error(
            "sbm posterior: need 0 < q <= p < 1 (log singularity at the boundary)");
    SbmCouplingTerms t;
    t.j_edge = 0.5 * std::log((pb + d) / (pb - d));
    t.j_gap = 0.5 * std::log((1.0 - pb - d) / (1.0 - pb + d));
    t.c_edge = 0.5 * std::log((pb + d) * (pb - d));
    t.c_gap = 0.5 * std::log((1.0 - pb - d) * (1.0 - pb + d));
    return t;
}

void check_side(const SideInfo* side, int n, const char* who) {
    if (side && side->revealed.size() != n)
        throw parameter_error(std::string(who) + ": side information size mismatch");
}

struct RunningStats {
    double sum = 0.0;
    double sum_sq = 0.0;
    long count = 0;

    void add(double v) {
        sum += v;
        sum_sq += v * v;
        ++count;
    }
    double mean() const { return sum / count; }
    double std_error() const {
        if (count < 2) return 0.0;
        const double var = (sum_sq - sum * sum / count) / (count - 1);
        return std::sqrt(std::max(var, 0.0) / count);
    }
};

void check_mc(int mc_samples, const char* who) {
    if (mc_samples < 1)
        throw parameter_error(std::string(who) + ": need mc_samples >= 1");
}

void check_eps(double eps, const char* who) {
    if (!(eps >= 0.0 && eps <= 1.0))
        throw parameter_error(std::string(who) + ": eps must be in [0, 1]");
}

Eigen::VectorXi random_labels(int n, Rng& rng) {
    Eigen::VectorXi x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.pm_one();
    return x;
}

RevealMask sample_reveal_mask(const Eigen::VectorXi& labels, double eps, Rng& rng) {
    RevealMask mask;
    for (int i = 0; i < labels.size(); ++i) {
        if (rng.uniform() < eps) {
            mask.care |= std::uint32_t{1} << i;
            if (labels[i] == -1) mask.want |= std::uint32_t{1} << i;
            mask.any = true;
        }
    }
    return mask;
}

// Posterior pair means m_ij from enumerated log weights; returns the
// posterior pair risk sum_{i<j} E[(x_i x_j - m_ij)^2 | obs] = sum (1 - m_ij^2),
// the Rao-Blackwellized estimator of the matrix MMSE sum.
double pair_risk_sum(const std::vector<double>& vals, const RevealMask& mask, int n,
                     std::vector<double>& probs) {
    const std::size_t count = vals.size();
    probs.resize(count);
    double max_val = kNegInf;
    for (std::size_t idx = 0; idx < count; ++idx)
        if (mask.allows(static_cast<std::uint32_t>(idx)) && vals[idx] > max_val)
            max_val = vals[idx];
    double z = 0.0;
    for (std::size_t idx = 0; idx < count; ++idx) {
        const bool ok = mask.allows(static_cast<std::uint32_t>(idx));
        probs[idx] = ok ? std::exp(vals[idx] - max_val) : 0.0;
        z += probs[idx];
    }

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd x(n);
    for (std::size_t idx = 0; idx < count; ++idx) {
        const double w = probs[idx];
        if (w == 0.0) continue;
        for (int i = 0; i < n; ++i) x[i] = ((idx >> i) & 1u) ? -1.0 : 1.0;
        m.selfadjointView<Eigen::Upper>().rankUpdate(x, w);
    }
    double risk = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double mij = m(i, j) / z;
            risk += 1.0 - mij * mij;
        }
    return risk;
}

}  // namespace

void ExactPosterior::normalize() {
    const double log_z = log_sum_exp_masked(log_weights, RevealMask{});
    if (!std::isfinite(log_z))
        throw numeric_error("ExactPosterior::normalize: empty support");
    for (double& w : log_weights)
        if (w != kNegInf) w -= log_z;
    normalized = true;
}

ExactPosterior exact_posterior(const SpikedInstance& instance, const SideInfo* side,
                               double lambda) {
    check_capacity(instance.n, "exact_posterior(gauss)");
    check_side(side, instance.n, "exact_posterior(gauss)");
    if (lambda < 0.0) lambda = instance.lambda;
    if (!(lambda > 0.0))
        throw parameter_error("exact_posterior(gauss): need lambda > 0");

    const double coeff = std::sqrt(lambda / instance.n);
    Eigen::MatrixXd couplings = coeff * instance.y;
    couplings.diagonal().setZero();
    return make_posterior(couplings, 0.0, instance.n, PosteriorMode::gauss, side);
}

ExactPosterior exact_posterior(const SbmInstance& instance, const SideInfo* side) {
    const int n = instance.params.n;
    check_capacity(n, "exact_posterior(sbm)");
    check_side(side, n, "exact_posterior(sbm)");
    const SbmCouplingTerms t = sbm_coupling_terms(instance.params);

    Eigen::MatrixXd couplings = Eigen::MatrixXd::Zero(n, n);
    double constant = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const bool edge = instance.adjacency.at(i, j);
            const double jij = edge ? t.j_edge : t.j_gap;
            couplings(i, j) = jij;
            couplings(j, i) = jij;
            constant += edge ? t.c_edge : t.c_gap;
        }
    return make_posterior(couplings, constant, n, PosteriorMode::sbm, side);
}

MetricsReport metrics_from_posterior(const ExactPosterior& posterior,
                                     const Eigen::VectorXi& labels) {
    if (!posterior.normalized)
        throw state_error("metrics_from_posterior: posterior must be normalized");
    const int n = posterior.n;
    if (labels.size() != n)
        throw parameter_error("metrics_from_posterior: labels size mismatch");

    const std::size_t count = posterior.log_weights.size();
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);  // pair means m_ki = E[x_k x_i]
    Eigen::VectorXd mean_all = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd x(n);
    for (std::size_t idx = 0; idx < count; ++idx) {
        const double lw = posterior.log_weights[idx];
        if (lw == kNegInf) continue;
        const double w = std::exp(lw);
        for (int i = 0; i < n; ++i) x[i] = ((idx >> i) & 1u) ? -1.0 : 1.0;
        m.selfadjointView<Eigen::Upper>().rankUpdate(x, w);
        mean_all += w * x;
    }
    m.triangularView<Eigen::StrictlyLower>() = m.transpose();
    m.diagonal().setOnes();

    // All square errors below are posterior risks E[. | observations]; the
    // outer average over instances happens in the Monte Carlo callers.
    MetricsReport report;
    double risk = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) risk += 1.0 - m(i, j) * m(i, j);
    report.mmse_matrix = 2.0 * risk / (static_cast<double>(n) * (n - 1));
    report.mmse_matrix_n2 = 2.0 * risk / (static_cast<double>(n) * n);

    // The vector estimate conditions on the most informative vertex: row k of
    // the pair-mean matrix is the conditional mean given x_k = +1, and its
    // sign-optimal risk is at most (1/n) sum_i (1 - m_ki^2). The row average
    // of that bound equals (1-1/n)*mmse_matrix, so the best row keeps
    // vmmse <= mmse_matrix on every instance, not just in expectation.
    int best_row = 0;
    double best_norm = -1.0;
    for (int k = 0; k < n; ++k) {
        const double norm = m.row(k).squaredNorm();
        if (norm > best_norm) {
            best_norm = norm;
            best_row = k;
        }
    }

    auto sign_optimal_risk = [&](const Eigen::VectorXd& xhat) {
        // E[min_s ||x - s xhat||^2 | obs] = n + ||xhat||^2 - 2 E|<x, xhat>|.
        double mean_abs_dot = 0.0;
        for (std::size_t idx = 0; idx < count; ++idx) {
            const double lw = posterior.log_weights[idx];
            if (lw == kNegInf) continue;
            double dot = 0.0;
            for (int i = 0; i < n; ++i)
                dot += ((idx >> i) & 1u) ? -xhat[i] : xhat[i];
            mean_abs_dot += std::exp(lw) * std::fabs(dot);
        }
        return (n + xhat.squaredNorm() - 2.0 * mean_abs_dot) / static_cast<double>(n);
    };

    Eigen::VectorXd xhat = m.row(best_row).transpose();
    report.vmmse = sign_optimal_risk(xhat);
    if (posterior.sign_broken) {
        const double mean_risk = sign_optimal_risk(mean_all);
        if (mean_risk < report.vmmse) {
            report.vmmse = mean_risk;
            xhat = mean_all;
        }
    }

    double dot = 0.0;
    for (int i = 0; i < n; ++i) dot += labels[i] * (xhat[i] < 0.0 ? -1.0 : 1.0);
    report.overlap_lb = std::fabs(dot) / n;
    return report;
}

MonteCarloEstimate exact_mi_gauss(int n, double lambda, double eps, int mc_samples,
                                  std::uint64_t seed) {
    check_capacity(n, "exact_mi_gauss");
    check_eps(eps, "exact_mi_gauss");
    check_mc(mc_samples, "exact_mi_gauss");
    if (!(lambda >= 0.0)) throw parameter_error("exact_mi_gauss: need lambda >= 0");

    const double coeff = std::sqrt(lambda / n);
    RunningStats stats;
    std::vector<double> vals;
    Eigen::MatrixXd couplings(n, n);
    for (int r = 0; r < mc_samples; ++r) {
        Rng rng(derive_seed(seed, stream::replicate, r));
        const Eigen::VectorXi labels = random_labels(n, rng);
        double offset = 0.0;  // sum_{i<j} V_ij X_i X_j
        couplings.setZero();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double v = coeff * rng.gaussian();
                const double c = v + (lambda / n) * labels[i] * labels[j];
                couplings(i, j) = c;
                couplings(j, i) = c;
                offset += v * labels[i] * labels[j];
            }
        const RevealMask mask = sample_reveal_mask(labels, eps, rng);
        enumerate_pair_sums(couplings, n, vals);
        const double phi = log_sum_exp_masked(vals, mask) - offset;
        stats.add((n * kLog2 + 0.5 * (n - 1) * lambda - phi) / n);
    }
    return {stats.mean(), stats.std_error(), mc_samples};
}

MonteCarloEstimate exact_mi_sbm(const SbmParams& params, double eps, int mc_samples,
                                std::uint64_t seed) {
    const int n = params.n;
    check_capacity(n, "exact_mi_sbm");
    check_eps(eps, "exact_mi_sbm");
    check_mc(mc_samples, "exact_mi_sbm");
    const SbmCouplingTerms t = sbm_coupling_terms(params);

    RunningStats stats;
    std::vector<double> vals;
    Eigen::MatrixXd couplings(n, n);
    for (int r = 0; r < mc_samples; ++r) {
        Rng rng(derive_seed(seed, stream::replicate, r));
        const Eigen::VectorXi labels = random_labels(n, rng);
        couplings.setZero();
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double prob = labels[i] == labels[j] ? params.p : params.q;
                const double jij = rng.uniform() < prob ? t.j_edge : t.j_gap;
                couplings(i, j) = jij;
                couplings(j, i) = jij;
            }
        const RevealMask mask = sample_reveal_mask(labels, eps, rng);
        enumerate_pair_sums(couplings, n, vals);
        const double log_z = log_sum_exp_masked(vals, mask);
        stats.add((n * kLog2 - log_z + pair_sum(couplings, labels)) / n);
    }
    return {stats.mean(), stats.std_error(), mc_samples};
}

MonteCarloEstimate immse_check(int n, double lambda, double dlambda, double eps,
                               int mc_samples, std::uint64_t seed) {
    check_capacity(n, "immse_check");
    check_eps(eps, "immse_check");
    check_mc(mc_samples, "immse_check");
    if (!(dlambda > 0.0 && lambda - dlambda > 0.0))
        throw parameter_error("immse_check: need 0 < dlambda < lambda");

    const double lam_hi = lambda + dlambda;
    const double lam_lo = lambda - dlambda;
    RunningStats stats;
    std::vector<double> vals_hi, vals_lo, vals_mid, probs;
    Eigen::MatrixXd z(n, n), c_hi(n, n), c_lo(n, n), c_mid(n, n);
    for (int r = 0; r < mc_samples; ++r) {
        Rng rng(derive_seed(seed, stream::replicate, r));
        const Eigen::VectorXi labels = random_labels(n, rng);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) z(i, j) = rng.gaussian();
        const RevealMask mask = sample_reveal_mask(labels, eps, rng);

        // Shared noise across lambda +- dlambda and the midpoint posterior.
        auto fill = [&](double lam, Eigen::MatrixXd& c, double& offset) {
            const double coeff = std::sqrt(lam / n);
            c.setZero();
            offset = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    const double v = coeff * z(i, j);
                    const double cc = v + (lam / n) * labels[i] * labels[j];
                    c(i, j) = cc;
                    c(j, i) = cc;
                    offset += v * labels[i] * labels[j];
                }
        };
        double off_hi, off_lo, off_mid;
        fill(lam_hi, c_hi, off_hi);
        fill(lam_lo, c_lo, off_lo);
        fill(lambda, c_mid, off_mid);

        enumerate_pair_sums(c_hi, n, vals_hi);
        enumerate_pair_sums(c_lo, n, vals_lo);
        enumerate_pair_sums(c_mid, n, vals_mid);
        const double phi_hi = log_sum_exp_masked(vals_hi, mask) - off_hi;
        const double phi_lo = log_sum_exp_masked(vals_lo, mask) - off_lo;
        const double fd = 0.5 * (n - 1.0) / n - (phi_hi - phi_lo) / (2.0 * dlambda * n);

        const double err = pair_risk_sum(vals_mid, mask, n, probs);
        const double mmse_n2 = 2.0 * err / (static_cast<double>(n) * n);
        stats.add(fd - 0.25 * mmse_n2);
    }
    return {stats.mean(), stats.std_error(), mc_samples};
}

ThetaDerivativeCheck sbm_theta_derivative_check(int n, double theta, double dtheta,
                                                double pbar, int mc_samples,
                                                std::uint64_t seed) {
    check_capacity(n, "sbm_theta_derivative_check");
    check_mc(mc_samples, "sbm_theta_derivative_check");
    if (!(dtheta > 0.0 && theta - dtheta >= 0.0))
        throw parameter_error("sbm_theta_derivative_check: need 0 < dtheta <= theta");
    const SbmParams par_hi = params_from_lambda(n, pbar, theta + dtheta);
    const SbmParams par_lo = params_from_lambda(n, pbar, theta - dtheta);
    const SbmParams par_mid = params_from_lambda(n, pbar, theta);
    const SbmCouplingTerms t_hi = sbm_coupling_terms(par_hi);
    const SbmCouplingTerms t_mid = sbm_coupling_terms(par_mid);
    const SbmCouplingTerms t_lo = sbm_coupling_terms(par_lo);  // theta = dtheta gives p = q, all couplings 0

    RunningStats stats;
    std::vector<double> vals_hi, vals_lo, vals_mid, probs;
    Eigen::MatrixXd c_hi(n, n), c_lo(n, n), c_mid(n, n);
    const RevealMask no_mask;
    for (int r = 0; r < mc_samples; ++r) {
        Rng rng(derive_seed(seed, stream::replicate, r));
        const Eigen::VectorXi labels = random_labels(n, rng);
        c_hi.setZero();
        c_lo.setZero();
        c_mid.setZero();
        double sum_hi = 0.0, sum_lo = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double u = rng.uniform();  // shared across all three graphs
                const bool agree = labels[i] == labels[j];
                const bool e_hi = u < (agree ? par_hi.p : par_hi.q);
                const bool e_lo = u < (agree ? par_lo.p : par_lo.q);
                const bool e_mid = u < (agree ? par_mid.p : par_mid.q);
                const double j_hi = e_hi ? t_hi.j_edge : t_hi.j_gap;
                const double j_lo = e_lo ? t_lo.j_edge : t_lo.j_gap;
                c_hi(i, j) = c_hi(j, i) = j_hi;
                c_lo(i, j) = c_lo(j, i) = j_lo;
                c_mid(i, j) = c_mid(j, i) = e_mid ? t_mid.j_edge : t_mid.j_gap;
                const int prod = labels[i] * labels[j];
                sum_hi += j_hi * prod;
                sum_lo += j_lo * prod;
            }
        enumerate_pair_sums(c_hi, n, vals_hi);
        enumerate_pair_sums(c_lo, n, vals_lo);
        enumerate_pair_sums(c_mid, n, vals_mid);
        const double mi_hi = n * kLog2 - log_sum_exp_masked(vals_hi, no_mask) + sum_hi;
        const double mi_lo = n * kLog2 - log_sum_exp_masked(vals_lo, no_mask) + sum_lo;
        const double fd = (mi_hi - mi_lo) / (2.0 * dtheta * n);

        const double err = pair_risk_sum(vals_mid, no_mask, n, probs);
        const double mmse_pair = 2.0 * err / (static_cast<double>(n) * (n - 1));
        stats.add(fd - 0.25 * mmse_pair);
    }
    ThetaDerivativeCheck check;
    check.residual = stats.mean();
    check.std_error = stats.std_error();
    check.bound_scale = std::sqrt(theta / (n * pbar * (1.0 - pbar)));
    check.samples = mc_samples;
    return check;
}

std::vector<UniversalityGap> universality_gap(int n, double lambda,
                                              const std::vector<double>& pbar_list,
                                              int mc_samples, std::uint64_t seed) {
    check_capacity(n, "universality_gap");
    check_mc(mc_samples, "universality_gap");

    std::vector<UniversalityGap> gaps;
    gaps.reserve(pbar_list.size());
    std::vector<double> vals_sbm, vals_gauss;
    const RevealMask no_mask;
    for (std::size_t pi = 0; pi < pbar_list.size(); ++pi) {
        const double pbar = pbar_list[pi];
        const SbmParams params = params_from_lambda(n, pbar, lambda);
        const SbmCouplingTerms t = sbm_coupling_terms(params);
        const double coeff = std::sqrt(lambda / n);
        const std::uint64_t pbar_seed = derive_seed(seed, 1000 + pi);

        RunningStats diff_stats, sbm_stats, gauss_stats;
        Eigen::MatrixXd c_sbm(n, n), c_gauss(n, n);
        for (int r = 0; r < mc_samples; ++r) {
            Rng rng(derive_seed(pbar_seed, stream::replicate, r));
            const Eigen::VectorXi labels = random_labels(n, rng);
            c_sbm.setZero();
            c_gauss.setZero();
            double sum_sbm = 0.0, offset = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    const double zij = rng.gaussian();
                    // Coupled noise: u = Phi(z) is uniform and monotone in z.
                    const double u = 0.5 * std::erfc(-zij * M_SQRT1_2);
                    const bool agree = labels[i] == labels[j];
                    const bool edge = u < (agree ? params.p : params.q);
                    const double jij = edge ? t.j_edge : t.j_gap;
                    c_sbm(i, j) = c_sbm(j, i) = jij;
                    const int prod = labels[i] * labels[j];
                    sum_sbm += jij * prod;
                    const double v = coeff * zij;
                    const double cg = v + (lambda / n) * prod;
                    c_gauss(i, j) = c_gauss(j, i) = cg;
                    offset += v * prod;
                }
            enumerate_pair_sums(c_sbm, n, vals_sbm);
            enumerate_pair_sums(c_gauss, n, vals_gauss);
            const double mi_sbm =
                (n * kLog2 - log_sum_exp_masked(vals_sbm, no_mask) + sum_sbm) / n;
            const double phi = log_sum_exp_masked(vals_gauss, no_mask) - offset;
            const double mi_gauss =
                (n * kLog2 + 0.5 * (n - 1) * lambda - phi) / n;
            diff_stats.add(mi_sbm - mi_gauss);
            sbm_stats.add(mi_sbm);
            gauss_stats.add(mi_gauss);
        }
        UniversalityGap gap;
        gap.pbar = pbar;
        gap.gap = std::fabs(diff_stats.mean());
        gap.std_error = diff_stats.std_error();
        gap.predictor = std::pow(lambda, 1.5) / std::sqrt(n * pbar * (1.0 - pbar));
        gap.mi_sbm = sbm_stats.mean();
        gap.mi_gauss = gauss_stats.mean();
        gaps.push_back(gap);
    }
    return gaps;
}

}  // namespace sbminfo
