#pragma once

#include <cmath>
#include <cstdint>
#include <utility>

namespace prox3d {

// Deterministic random source used everywhere reproducibility matters.
//
// The engine is xoshiro256++ seeded through splitmix64, and all variate
// mappings (uniform, normal, Laplace) are implemented here rather than
// taken from <random>, whose distributions are implementation-defined.
// Two builds on different standard libraries therefore produce identical
// streams, which keeps dataset files and training runs byte-reproducible.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
  }

  // Independent child stream keyed by (k0, k1). Streams derived from the
  // same parent with different keys are uncorrelated regardless of how
  // much the parent has been consumed, so work can be sharded by key.
  Rng derive(std::uint64_t k0, std::uint64_t k1 = 0) const {
    std::uint64_t s = state_[0] ^ (0x9e3779b97f4a7c15ULL + k0);
    s = mix(s ^ mix(k1 + 0x243f6a8885a308d3ULL));
    return Rng(s);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // [0, n); multiply-shift range reduction.
  std::uint64_t uniform_index(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

  // Box-Muller; consumes two uniforms per call, no cached state.
  double normal(double mean = 0.0, double stddev = 1.0) {
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * kPi * u2);
  }

  // Inverse-CDF sampling; scale <= 0 degenerates to the location.
  double laplace(double location, double scale) {
    if (scale <= 0.0) return location;
    const double u = uniform01() - 0.5;
    return location - scale * sign(u) * std::log1p(-2.0 * std::abs(u));
  }

  bool bernoulli(double p) { return uniform01() < p; }

  template <typename RandomIt>
  void shuffle(RandomIt first, RandomIt last) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
      std::swap(first[i - 1], first[uniform_index(i)]);
    }
  }

 private:
  static constexpr double kPi = 3.14159265358979323846;

  static std::uint64_t splitmix64(std::uint64_t& s) {
    std::uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  static double sign(double x) { return x < 0.0 ? -1.0 : 1.0; }

  std::uint64_t state_[4];
};

}  // namespace prox3d
