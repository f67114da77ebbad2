#pragma once

#include <cstdint>
#include <random>

namespace nesyv {

// Seeded generator with hand-rolled draws so that the produced stream is
// identical across standard-library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t bits() { return gen_(); }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform in [0, n). Modulo bias is irrelevant at the sizes used here.
    int uniform_int(int n) { return static_cast<int>(bits() % static_cast<std::uint64_t>(n)); }

    bool coin() { return (bits() & 1) != 0; }

    // Independent child seed.
    std::uint64_t fork() { return bits(); }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[static_cast<std::size_t>(uniform_int(static_cast<int>(i)))]);
    }

private:
    std::mt19937_64 gen_;
};

} // namespace nesyv
