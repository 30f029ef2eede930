#include "sbminfo/models.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "sbminfo/errors.hpp"
#include "sbminfo/rng.hpp"

namespace sbminfo {

namespace {

void check_n(int n, const char* who) {
    if (n < 2) throw parameter_error(std::string(who) + ": need n >= 2");
}

Eigen::VectorXi sample_labels(int n, Rng& rng) {
    Eigen::VectorXi labels(n);
    for (int i = 0; i < n; ++i) labels[i] = rng.pm_one();
    return labels;
}

void check_labels(const Eigen::VectorXi& labels, const char* who) {
    for (int i = 0; i < labels.size(); ++i)
        if (labels[i] != 1 && labels[i] != -1)
            throw parameter_error(std::string(who) + ": labels must be +-1");
}

}  // namespace

std::size_t Adjacency::edge_count() const {
    std::size_t c = 0;
    for (std::uint64_t w : bits_) c += std::popcount(w);
    return c;
}

SbmParams make_sbm_params(int n, double p, double q) {
    check_n(n, "make_sbm_params");
    if (!(0.0 <= q && q <= p && p <= 1.0))
        throw parameter_error("make_sbm_params: need 0 <= q <= p <= 1");
    SbmParams params;
    params.n = n;
    params.p = p;
    params.q = q;
    params.pbar = 0.5 * (p + q);
    params.delta = 0.5 * (p - q);
    if (!(params.pbar > 0.0 && params.pbar < 1.0))
        throw parameter_error("make_sbm_params: need 0 < (p+q)/2 < 1");
    params.lambda_n =
        n * (p - q) * (p - q) / (4.0 * params.pbar * (1.0 - params.pbar));
    return params;
}

SbmParams params_from_lambda(int n, double pbar, double lambda) {
    check_n(n, "params_from_lambda");
    if (!(pbar > 0.0 && pbar < 1.0))
        throw parameter_error("params_from_lambda: need 0 < pbar < 1");
    if (!(lambda >= 0.0))
        throw parameter_error("params_from_lambda: need lambda >= 0");
    const double gap2 = pbar * (1.0 - pbar) * lambda / n;  // (p - pbar)^2
    const double limit = std::min(pbar, 1.0 - pbar);
    if (gap2 > limit * limit)
        throw parameter_error(
            "params_from_lambda: infeasible, lambda*pbar*(1-pbar)/n = " +
            std::to_string(gap2) + " exceeds min(pbar,1-pbar)^2 = " +
            std::to_string(limit * limit));
    const double gap = std::sqrt(gap2);
    return make_sbm_params(n, pbar + gap, pbar - gap);
}

SbmInstance sample_sbm(const SbmParams& params, std::uint64_t seed,
                       const Eigen::VectorXi* labels) {
    const int n = params.n;
    check_n(n, "sample_sbm");

    SbmInstance instance;
    instance.params = params;
    instance.seed = seed;

    Rng label_rng(derive_seed(seed, stream::labels));
    if (labels) {
        if (labels->size() != n)
            throw parameter_error("sample_sbm: provided labels have wrong size");
        check_labels(*labels, "sample_sbm");
        instance.labels = *labels;
    } else {
        instance.labels = sample_labels(n, label_rng);
    }

    Rng edge_rng(derive_seed(seed, stream::edges));
    instance.adjacency = Adjacency(n);
    for (int i = 0; i < n; ++i) {
        const int xi = instance.labels[i];
        for (int j = i + 1; j < n; ++j) {
            const double prob = (xi == instance.labels[j]) ? params.p : params.q;
            if (edge_rng.uniform() < prob) instance.adjacency.set(i, j);
        }
    }
    return instance;
}

Eigen::MatrixXd rescale_adjacency(const SbmInstance& instance) {
    const SbmParams& params = instance.params;
    if (!(params.pbar > 0.0 && params.pbar < 1.0))
        throw parameter_error("rescale_adjacency: need 0 < pbar < 1");
    const int n = params.n;
    const double scale = 1.0 / std::sqrt(params.pbar * (1.0 - params.pbar));
    const double on = (1.0 - params.pbar) * scale;
    const double off = -params.pbar * scale;

    Eigen::MatrixXd m(n, n);
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i)
            m(i, j) = (i == j) ? 0.0 : (instance.adjacency.at(i, j) ? on : off);
    }
    return m;
}

SpikedInstance sample_spiked(int n, double lambda, std::uint64_t seed,
                             const Eigen::VectorXi* labels) {
    check_n(n, "sample_spiked");
    if (!(lambda >= 0.0))
        throw parameter_error("sample_spiked: need lambda >= 0");

    SpikedInstance instance;
    instance.n = n;
    instance.lambda = lambda;
    instance.seed = seed;

    Rng label_rng(derive_seed(seed, stream::labels));
    if (labels) {
        if (labels->size() != n)
            throw parameter_error("sample_spiked: provided labels have wrong size");
        check_labels(*labels, "sample_spiked");
        instance.labels = *labels;
    } else {
        instance.labels = sample_labels(n, label_rng);
    }

    // Noise comes from its own stream, so the same seed with different labels
    // reuses the identical Z matrix.
    Rng noise_rng(derive_seed(seed, stream::noise));
    const double snr = std::sqrt(lambda / n);
    const double sqrt2 = std::sqrt(2.0);
    instance.y.resize(n, n);
    for (int i = 0; i < n; ++i) {
        instance.y(i, i) = snr + sqrt2 * noise_rng.gaussian();
        for (int j = i + 1; j < n; ++j) {
            const double v =
                snr * instance.labels[i] * instance.labels[j] + noise_rng.gaussian();
            instance.y(i, j) = v;
            instance.y(j, i) = v;
        }
    }
    return instance;
}

SideInfo sample_side_info(const Eigen::VectorXi& labels, double eps,
                          std::uint64_t seed) {
    check_labels(labels, "sample_side_info");
    if (!(eps >= 0.0 && eps <= 1.0))
        throw parameter_error("sample_side_info: eps must be in [0, 1]");

    SideInfo side;
    side.eps = eps;
    side.seed = seed;
    side.revealed = Eigen::VectorXi::Zero(labels.size());
    Rng rng(derive_seed(seed, stream::side_info));
    for (int i = 0; i < labels.size(); ++i)
        if (rng.uniform() < eps) side.revealed[i] = labels[i];
    return side;
}

void write_sbm_edge_list(const SbmInstance& instance, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    char header[160];
    std::snprintf(header, sizeof(header), "# sbm n=%d p=%.17g q=%.17g seed=%llu\n",
                  instance.params.n, instance.params.p, instance.params.q,
                  static_cast<unsigned long long>(instance.seed));
    out << header;
    const int n = instance.params.n;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (instance.adjacency.at(i, j)) out << i << ' ' << j << '\n';
    if (!out) throw std::runtime_error("write failed on " + path);
}

void write_labels(const Eigen::VectorXi& labels, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    for (int i = 0; i < labels.size(); ++i) out << labels[i] << '\n';
    if (!out) throw std::runtime_error("write failed on " + path);
}

void write_spiked_matrix(const SpikedInstance& instance, const std::string& path,
                         const std::string& sidecar_path) {
    static_assert(std::endian::native == std::endian::little,
                  "matrix export assumes a little-endian host");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    const int n = instance.n;
    for (int i = 0; i < n; ++i)
        out.write(reinterpret_cast<const char*>(instance.y.row(i).eval().data()),
                  static_cast<std::streamsize>(n) * sizeof(double));
    if (!out) throw std::runtime_error("write failed on " + path);

    std::ofstream sidecar(sidecar_path);
    if (!sidecar) throw std::runtime_error("cannot open " + sidecar_path);
    char line[128];
    std::snprintf(line, sizeof(line), "n=%d lambda=%.17g seed=%llu\n", n,
                  instance.lambda, static_cast<unsigned long long>(instance.seed));
    sidecar << line;
}

}  // namespace sbminfo
