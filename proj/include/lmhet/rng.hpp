#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "lmhet/errors.hpp"

namespace lmhet {

// 64-bit finalizer used both to seed streams and to derive substream seeds.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Deterministic random stream (xoshiro256++) with cheap, collision-resistant
// substreams.  The identity of a stream is its origin seed: the internal
// state is s[0] = mix64(seed), s[i] = mix64(s[i-1]), and a substream with
// index k is a fresh stream seeded with mix64(mix64(origin) + k).  A (seed,
// substream path) pair therefore pins the exact sequence regardless of how
// many draws other streams have consumed, which is what makes threaded
// simulations reproducible.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) noexcept : origin_(seed) {
    std::uint64_t sm = seed;
    for (auto& w : state_) {
      sm = mix64(sm);
      w = sm;
    }
  }

  std::uint64_t origin() const noexcept { return origin_; }

  RngStream substream(std::uint64_t index) const noexcept {
    return RngStream(mix64(mix64(origin_) + index));
  }

  std::uint64_t next_u64() noexcept {
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

  // Uniform on [0, 1), 53 random bits.
  double uniform01() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) {
    if (!(a < b))
      throw InputError("uniform: need a < b, got [" + std::to_string(a) + ", " +
                       std::to_string(b) + ")");
    return a + uniform01() * (b - a);
  }

  // Standard normal via the polar method; the second deviate of each pair is
  // cached, so draws come in the documented order.
  double std_normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  // Integer uniform on {0, .., m-1}.
  int uniform_int(int m) {
    if (m < 1) throw InputError("uniform_int: need m >= 1");
    const int j = static_cast<int>(uniform01() * m);
    return j < m ? j : m - 1;  // guard against rounding up at the boundary
  }

private:
  static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  std::uint64_t origin_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Uniform random permutation of 0..n-1 by Fisher-Yates, consuming exactly
// n-1 uniform draws.
inline std::vector<int> random_permutation(RngStream& rng, int n) {
  if (n < 1) throw InputError("random_permutation: need n >= 1");
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = rng.uniform_int(i + 1);
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

}  // namespace lmhet
