#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace resmooth {

// Deterministic 64-bit generator used for every random decision in the
// library. All draws are defined directly on raw engine output rather than
// on <random> distributions, so a sequence of draws can be re-derived
// independently (replay tests rely on this) and is identical across
// standard-library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform integer in [0, n), n > 0. Modulo reduction; the bias is
  // immaterial for the small ranges used here.
  std::uint64_t uniform_int(std::uint64_t n) { return next_u64() % n; }

  // Uniform double in [0, 1) with 53 random bits.
  double uniform_real() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform_real(double hi) { return uniform_real() * hi; }

  bool bernoulli(double p) { return uniform_real() < p; }

  // Standard normal via Box-Muller; consumes exactly two draws.
  double normal() {
    double u1 = uniform_real();
    double u2 = uniform_real();
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  double normal(double mu, double sigma) { return mu + sigma * normal(); }

 private:
  std::mt19937_64 engine_;
};

inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Derives an independent substream seed from a base seed and up to three
// stream tags (e.g. epoch and sample id). Same inputs, same seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
  std::uint64_t h = mix64(base ^ 0x243f6a8885a308d3ull);
  h = mix64(h ^ a);
  h = mix64(h ^ b);
  h = mix64(h ^ c);
  return h;
}

}  // namespace resmooth
