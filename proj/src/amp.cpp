#include "sbminfo/amp.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "sbminfo/errors.hpp"
#include "sbminfo/rng.hpp"

namespace sbminfo {

double denoiser(double y, int s, double lambda, int t) {
    if (s != 0) return s;
    if (t == 0) return 0.0;
    return std::tanh(std::sqrt(lambda) * y);
}

double denoiser_deriv(double y, int s, double lambda, int t) {
    if (s != 0 || t == 0) return 0.0;
    const double sqrt_lambda = std::sqrt(lambda);
    const double th = std::tanh(sqrt_lambda * y);
    return sqrt_lambda * (1.0 - th * th);
}

AmpTrajectory amp_run(const Eigen::MatrixXd& y, const SideInfo& side, double lambda,
                      int iterations, const Eigen::VectorXi& labels,
                      const QuadratureRule& rule, AmpOptions opts) {
    const Eigen::Index n = y.rows();
    if (y.cols() != n) throw parameter_error("amp_run: y must be square");
    if (side.revealed.size() != n || labels.size() != n)
        throw parameter_error("amp_run: side/labels size mismatch with y");
    if (iterations < 1) throw parameter_error("amp_run: need iterations >= 1");
    if (!(lambda > 0.0)) throw parameter_error("amp_run: need lambda > 0");

    const SETrajectory se = se_trajectory(lambda, side.eps, iterations, rule);
    const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
    const double nd = static_cast<double>(n);

    AmpTrajectory traj;
    traj.lambda = lambda;
    traj.eps = side.eps;
    traj.iterations = iterations;
    traj.steps.reserve(iterations);

    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);   // x^{t-1} entering step t
    Eigen::VectorXd f_prev = Eigen::VectorXd::Zero(n);  // f_{t-2}(x^{t-2})
    Eigen::VectorXd f_cur(n);                           // f_{t-1}(x^{t-1})
    double b_prev = 0.0;                                // b_{t-1}

    for (int t = 1; t <= iterations; ++t) {
        for (Eigen::Index i = 0; i < n; ++i)
            f_cur[i] = denoiser(x[i], side.revealed[i], lambda, t - 1);

        // x^t = (y/sqrt(n)) f_{t-1}(x^{t-1}) - b_{t-1} f_{t-2}(x^{t-2})
        Eigen::VectorXd x_next = (y * f_cur) * inv_sqrt_n;
        if (opts.onsager) x_next.noalias() -= b_prev * f_prev;

        const double max_abs = x_next.cwiseAbs().maxCoeff();
        if (!std::isfinite(max_abs) || max_abs > opts.max_abs)
            throw numeric_error("amp_run: iterate diverged at t=" + std::to_string(t),
                                t);

        double b = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            b += denoiser_deriv(x_next[i], side.revealed[i], lambda, t);
        b /= nd;

        AmpIteration rec;
        rec.t = t;
        rec.b = b;
        const double overlap = labels.cast<double>().dot(f_cur) / nd;
        const double norm2 = f_cur.squaredNorm() / nd;
        rec.empirical_overlap = overlap;
        rec.empirical_mse = 1.0 + norm2 * norm2 - 2.0 * overlap * overlap;
        const double ratio = se.gammas[t] / lambda;
        rec.se_overlap = ratio;
        rec.se_mse = 1.0 - ratio * ratio;
        if (opts.store_vectors) {
            rec.x = x_next;
            rec.xhat = f_cur;
        }
        traj.steps.push_back(std::move(rec));

        f_prev.swap(f_cur);
        b_prev = b;
        x.swap(x_next);
    }
    return traj;
}

void write_trajectory_csv(const AmpTrajectory& traj, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << "t,b_t,empirical_overlap,se_overlap,empirical_mse,se_mse\n";
    char line[256];
    for (const AmpIteration& rec : traj.steps) {
        std::snprintf(line, sizeof(line), "%d,%.12g,%.12g,%.12g,%.12g,%.12g\n", rec.t,
                      rec.b, rec.empirical_overlap, rec.se_overlap, rec.empirical_mse,
                      rec.se_mse);
        out << line;
    }
    if (!out) throw std::runtime_error("write failed on " + path);
}

SpectralResult spectral_estimate(const Eigen::MatrixXd& m, int max_iter, double tol,
                                 std::uint64_t seed) {
    const Eigen::Index n = m.rows();
    if (m.cols() != n) throw parameter_error("spectral_estimate: matrix must be square");
    if (!(tol > 0.0)) throw parameter_error("spectral_estimate: need tol > 0");

    Rng rng(derive_seed(seed, stream::start_vector));
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.gaussian();
    v.normalize();

    double rayleigh = 0.0;
    Eigen::VectorXd next(n);
    for (int it = 1; it <= max_iter; ++it) {
        next.noalias() = m * v;
        rayleigh = v.dot(next);
        const double norm = next.norm();
        if (norm == 0.0)
            throw numeric_error("spectral_estimate: iterate vanished", it);
        next /= norm;
        // Sign-agnostic distance: the dominant eigenvalue may be negative.
        const double diff = std::min((next - v).norm(), (next + v).norm());
        v = next;
        if (diff < tol) {
            SpectralResult result;
            result.eigenvector = v;
            result.rayleigh = v.dot(m * v);
            result.iterations = it;
            result.signs.resize(n);
            for (Eigen::Index i = 0; i < n; ++i) result.signs[i] = v[i] < 0.0 ? -1 : 1;
            return result;
        }
    }
    throw convergence_error("spectral_estimate: no convergence in " +
                                std::to_string(max_iter) + " iterations",
                            rayleigh, tol, max_iter);
}

}  // namespace sbminfo
