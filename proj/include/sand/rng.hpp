#ifndef SAND_RNG_HPP
#define SAND_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace sand {

// splitmix64 finalizer; used for seed mixing and sub-stream derivation.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Derives an independent stream seed from (seed, stream). Chaining calls
// derives nested streams, e.g. derive_seed(derive_seed(s, a), b).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    return mix64(seed ^ mix64(stream));
}

// Deterministic random stream. Wraps std::mt19937_64 (bit-exact across
// platforms per the standard) and supplies its own integer/real mappings:
// std::uniform_*_distribution is implementation-defined and must not be
// used anywhere results feed reproducible output.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(mix64(seed)) {}

    std::uint64_t next() { return eng_(); }

    // Uniform integer in [0, bound), bound > 0. Unbiased via rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = bound * ((~std::uint64_t{0}) / bound);
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % bound;
    }

    // Uniform integer in [lo, hi], inclusive.
    std::uint32_t range_u32(std::uint32_t lo, std::uint32_t hi) {
        return lo + static_cast<std::uint32_t>(below(std::uint64_t{hi} - lo + 1));
    }

    // Uniform real in [lo, hi).
    double real(double lo, double hi) {
        const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    std::mt19937_64 eng_;
};

} // namespace sand

#endif
