#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

// Deterministic random streams for the dataset generator.
//
// Requirements that shaped this:
//  - one independent stream per (run seed, sensor id) so adding a sensor never
//    perturbs another sensor's noise;
//  - bit-identical across platforms, so the gaussian transform is written out
//    here instead of relying on std::normal_distribution (whose algorithm is
//    implementation-defined).

namespace acwa {

// FNV-1a 64-bit hash; used for stream derivation and scenario digests.
inline constexpr std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// splitmix64 finalizer; decorrelates nearby seeds before they hit mt19937_64.
inline constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Derive the seed for a named substream of a run-level seed.
inline constexpr std::uint64_t substream_seed(std::uint64_t run_seed,
                                              std::string_view name) {
  return mix64(run_seed ^ fnv1a64(name));
}

// Gaussian source with an explicit Box-Muller transform. Consumes the
// underlying engine in a fixed pattern, so streams are reproducible
// byte-for-byte given the same seed.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform() {
    // 53 random bits -> double, same construction everywhere.
    return (engine_() >> 11) * 0x1.0p-53;
  }

  // Standard normal deviate.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // Guard the log against u1 == 0.
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace acwa
