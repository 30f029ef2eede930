#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace sbminfo {

// Two-groups SBM parameters. pbar, delta and lambda_n are derived from
// (n, p, q) at construction and kept consistent.
struct SbmParams {
    int n = 0;
    double p = 0.0;       // within-group edge probability
    double q = 0.0;       // across-group edge probability
    double pbar = 0.0;    // (p + q) / 2
    double delta = 0.0;   // (p - q) / 2
    double lambda_n = 0.0;  // n * (p - q)^2 / (4 pbar (1 - pbar))
};

SbmParams make_sbm_params(int n, double p, double q);

// Inverse parametrization: p = pbar + sqrt(pbar(1-pbar)*lambda/n),
// q = pbar - sqrt(...), so that lambda_n == lambda. Throws when the implied
// p or q would leave [0, 1].
SbmParams params_from_lambda(int n, double pbar, double lambda);

// Symmetric 0/1 adjacency with zero diagonal, stored as a packed
// upper-triangular bitset (i < j, row-major).
class Adjacency {
public:
    Adjacency() = default;
    explicit Adjacency(int n) : n_(n), bits_((pair_count(n) + 63) / 64, 0) {}

    int size() const { return n_; }

    bool at(int i, int j) const {
        if (i == j) return false;
        const std::size_t k = pair_index(i, j);
        return (bits_[k >> 6] >> (k & 63)) & 1u;
    }

    void set(int i, int j) {
        const std::size_t k = pair_index(i, j);
        bits_[k >> 6] |= std::uint64_t{1} << (k & 63);
    }

    std::size_t edge_count() const;

    bool operator==(const Adjacency&) const = default;

private:
    static std::size_t pair_count(int n) {
        return static_cast<std::size_t>(n) * (n - 1) / 2;
    }
    std::size_t pair_index(int i, int j) const {
        if (i > j) std::swap(i, j);
        // row-major over pairs i < j
        return static_cast<std::size_t>(i) * n_ - static_cast<std::size_t>(i) * (i + 1) / 2 +
               (j - i - 1);
    }

    int n_ = 0;
    std::vector<std::uint64_t> bits_;
};

struct SbmInstance {
    SbmParams params;
    Eigen::VectorXi labels;  // entries in {+1, -1}
    Adjacency adjacency;
    std::uint64_t seed = 0;
};

// Spiked Wigner observation y = sqrt(lambda/n) labels labels^T + Z with
// Z_ij ~ N(0,1) off-diagonal and Z_ii ~ N(0,2).
struct SpikedInstance {
    int n = 0;
    double lambda = 0.0;
    Eigen::VectorXi labels;
    Eigen::MatrixXd y;
    std::uint64_t seed = 0;
};

// Erasure side information: each label revealed independently with
// probability eps; erased coordinates are 0.
struct SideInfo {
    double eps = 0.0;
    Eigen::VectorXi revealed;  // entries in {+1, 0, -1}
    std::uint64_t seed = 0;
};

// Labels i.i.d. uniform on {+1,-1} unless provided; edges independent across
// unordered pairs, present with probability p when labels agree and q
// otherwise. Pairs are visited in row-major i < j order, so instances are
// reproducible bit-for-bit.
SbmInstance sample_sbm(const SbmParams& params, std::uint64_t seed,
                       const Eigen::VectorXi* labels = nullptr);

// (G_ij - pbar) / sqrt(pbar (1 - pbar)) off-diagonal, zero diagonal.
Eigen::MatrixXd rescale_adjacency(const SbmInstance& instance);

SpikedInstance sample_spiked(int n, double lambda, std::uint64_t seed,
                             const Eigen::VectorXi* labels = nullptr);

SideInfo sample_side_info(const Eigen::VectorXi& labels, double eps,
                          std::uint64_t seed);

// Text edge list with a `# sbm n=.. p=.. q=.. seed=..` header and one `i j`
// pair per line (0-based, i < j); companion label file with one +-1 per line.
void write_sbm_edge_list(const SbmInstance& instance, const std::string& path);
void write_labels(const Eigen::VectorXi& labels, const std::string& path);

// Binary little-endian float64 row-major full matrix plus a one-line text
// sidecar `n=.. lambda=.. seed=..` at sidecar_path.
void write_spiked_matrix(const SpikedInstance& instance, const std::string& path,
                         const std::string& sidecar_path);

}  // namespace sbminfo
