#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace simplexconf {

// Deterministic random source. mt19937_64 output is fully specified by the
// standard, and all variate transforms here are our own, so streams are
// reproducible across platforms and toolchains.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform draw strictly inside (0,1).
    double uniform() { return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1p-53; }

    // Standard normal via the inverse CDF.
    double normal();

    // Gamma(shape, scale 1) via Marsaglia-Tsang, with the power boost for
    // shape < 1.
    double gamma(double shape);

    bool bernoulli(double p) { return uniform() < p; }

    // Unbiased integer in [0, bound).
    std::uint64_t below(std::uint64_t bound);

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

  private:
    std::mt19937_64 gen_;
};

// Per-stream seed derivation (splitmix64 finalizer), so worker streams are
// independent of scheduling order.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

}  // namespace simplexconf
