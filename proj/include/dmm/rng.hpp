#pragma once

#include <cmath>
#include <cstdint>

namespace dmm {

// xoshiro256++ seeded through splitmix64. All sampling routines are built
// on top of the raw engine so that results are bit-identical across
// platforms and standard library versions.
class Rng {
 public:
  explicit Rng(uint64_t seed) {
    uint64_t x = seed;
    for (auto& word : state_) word = splitmix64(x);
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // uniform in [0, 1)
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in (0, 1]
  double next_double_pos() { return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53; }

  // uniform integer in [0, n), n >= 1
  uint64_t next_below(uint64_t n) {
    uint64_t threshold = (0 - n) % n;
    for (;;) {
      uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // index k with probability weights[k] / sum(weights); weights need not
  // be normalized but must be non-negative with a positive sum
  int categorical(const double* weights, int k) {
    double total = 0.0;
    for (int i = 0; i < k; i++) total += weights[i];
    double u = next_double() * total;
    double cum = 0.0;
    for (int i = 0; i < k - 1; i++) {
      cum += weights[i];
      if (u < cum) return i;
    }
    return k - 1;
  }

  double normal() {
    double u1 = next_double_pos();
    double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // Marsaglia-Tsang; shape > 0, unit scale
  double gamma(double shape) {
    if (shape < 1.0) {
      double u = next_double_pos();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      double u = next_double_pos();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
  }

  // Dirichlet draw; alpha[i] == 0 yields out[i] == 0 exactly
  void dirichlet(const double* alpha, int k, double* out) {
    double total = 0.0;
    for (int i = 0; i < k; i++) {
      out[i] = alpha[i] > 0.0 ? gamma(alpha[i]) : 0.0;
      total += out[i];
    }
    for (int i = 0; i < k; i++) out[i] /= total;
  }

 private:
  static uint64_t splitmix64(uint64_t& x) {
    uint64_t z = (x += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static uint64_t rotl(uint64_t x, int s) { return (x << s) | (x >> (64 - s)); }

  uint64_t state_[4];
};

// Stable stream derivation for per-sweep / per-partition chains.
inline uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b = 0) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (uint64_t v : {seed, a, b}) {
    for (int i = 0; i < 8; i++) {
      h ^= (v >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  }
  return h;
}

}  // namespace dmm
