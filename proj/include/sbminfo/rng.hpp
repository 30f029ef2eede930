#pragma once

#include <cmath>
#include <cstdint>

namespace sbminfo {

// SplitMix64: counter-based 64-bit generator (Steele, Lea, Flood 2014).
// The state advances by a fixed odd constant and the output is a bijective
// mix of the counter, so streams with distinct seeds never share structure.
// We use it everywhere instead of std:: engines because its output — and the
// Gaussians derived from it below — is identical across platforms and runs.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return splitmix64_mix(state_);
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe as a log() argument.
    double uniform_pos() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform() < p; }

    // Marsaglia polar method, caching the second variate of each pair.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    // Rademacher: +1 or -1 with equal probability.
    int pm_one() { return (next_u64() >> 63) ? 1 : -1; }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Derives an independent stream seed from (master, tag [, index]).
// Used to split one experiment seed into per-purpose and per-replicate
// streams deterministically.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag,
                                 std::uint64_t index = 0) {
    std::uint64_t h = splitmix64_mix(master ^ 0xD1B54A32D192ED03ULL);
    h = splitmix64_mix(h ^ (tag * 0x9E3779B97F4A7C15ULL));
    h = splitmix64_mix(h ^ (index * 0xBF58476D1CE4E5B9ULL));
    return h;
}

// Stream tags for derive_seed. Keeping them in one place guards against
// accidental stream reuse between e.g. labels and noise of one instance.
namespace stream {
constexpr std::uint64_t labels = 1;
constexpr std::uint64_t noise = 2;
constexpr std::uint64_t edges = 3;
constexpr std::uint64_t side_info = 4;
constexpr std::uint64_t start_vector = 5;
constexpr std::uint64_t replicate = 6;
}  // namespace stream

}  // namespace sbminfo
