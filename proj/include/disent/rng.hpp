#pragma once

#include <complex>
#include <cstdint>
#include <random>

namespace disent {

/// Deterministic random stream: mt19937_64 engine with the sampling
/// transforms done by hand so that a seed produces the same sequence on
/// every platform and standard library. <random> distributions are
/// implementation-defined, which would break golden-file tests.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t draw_u64() { return engine_(); }

    /// Uniform on [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller. Consumes two engine draws.
    double gaussian() {
        // u1 in (0, 1] so the log is finite.
        double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
        double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
    }

    /// Complex Gaussian with independent N(0,1) real and imaginary parts,
    /// so E|z|^2 = 2. Both Box-Muller outputs are used.
    std::complex<double> complex_gaussian() {
        double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
        double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        double r = std::sqrt(-2.0 * std::log(u1));
        double t = 6.283185307179586477 * u2;
        return {r * std::cos(t), r * std::sin(t)};
    }

    /// Stable seed derivation for independent child streams:
    /// seed_i = hash(root, i). splitmix64 applied twice over the mixed input.
    static std::uint64_t derive(std::uint64_t root, std::uint64_t index) {
        auto mix = [](std::uint64_t x) {
            x += 0x9e3779b97f4a7c15ull;
            x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
            x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
            return x ^ (x >> 31);
        };
        return mix(root ^ mix(index + 0x2545f4914f6cdd1dull));
    }

  private:
    std::mt19937_64 engine_;
};

} // namespace disent
