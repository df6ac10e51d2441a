#pragma once

#include <cmath>
#include <cstdint>

namespace kerncollab {

// SplitMix64 finalizer. Used both as the generator step and for key
// derivation, so per-run / per-client streams are independent of the
// order in which they are consumed.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a stream key from (seed, a, b, c), e.g. (seed, run, client, purpose).
inline uint64_t derive_key(uint64_t seed, uint64_t a, uint64_t b = 0,
                           uint64_t c = 0) {
  uint64_t k = mix64(seed ^ 0x6a09e667f3bcc908ULL);
  k = mix64(k ^ mix64(a ^ 0xbb67ae8584caa73bULL));
  k = mix64(k ^ mix64(b ^ 0x3c6ef372fe94f82bULL));
  k = mix64(k ^ mix64(c ^ 0xa54ff53a5f1d36f1ULL));
  return k;
}

// Counter-based stream: state advances by the SplitMix64 increment, output
// is the finalizer. Deterministic across platforms; no global state.
class Rng {
 public:
  explicit Rng(uint64_t key) : state_(key) {}

  uint64_t next_u64() { return mix64(state_++); }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // uniform integer in [0, n)
  int uniform_int(int n) {
    return static_cast<int>((static_cast<__uint128_t>(next_u64()) *
                             static_cast<__uint128_t>(n)) >> 64);
  }

  // standard normal via Box-Muller (two uniforms per draw, no caching)
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

 private:
  uint64_t state_;
};

}  // namespace kerncollab
