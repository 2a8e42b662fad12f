#pragma once

#include <cstdint>
#include <limits>
#include <random>

#include "depfn/normal.hpp"

namespace depfn {

// splitmix64 finalizer (Steele/Lea/Flood); also used as the seed mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic seed splitting: a master seed plus up to two stream keys.
// Used so that parallel study cells reproduce serial runs: the seed of cell
// (n, r) depends only on (master, n, r), never on scheduling or on which
// other cells exist.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t k1, std::uint64_t k2 = 0) {
    std::uint64_t s = mix64(master ^ mix64(k1 + 0x9e3779b97f4a7c15ULL));
    return mix64(s ^ mix64(k2 + 0x3c6ef372fe94f82aULL));
}

// mt19937_64 with explicit output transforms. The engine's output sequence
// is pinned by the standard; std::uniform_real_distribution and friends are
// not, so all variate transforms are spelled out here.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    std::uint64_t bits() { return eng_(); }

    // uniform on [0, 1), 53-bit resolution
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    // uniform on (0, 1)
    double uniform_pos() {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return u;
    }

    // unbiased integer in {0, ..., n-1}
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return v % n;
    }

    // standard normal via the inverse CDF (portable, ~1 ulp)
    double normal() { return normal_quantile(uniform_pos()); }

    // exponential with the given rate; rate == 0 means the event never fires
    double exponential(double rate) {
        if (rate <= 0.0) return std::numeric_limits<double>::infinity();
        return -std::log(uniform_pos()) / rate;
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace depfn
