#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "sharplab/bits.hpp"

namespace sharplab {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Combine a stream id with a task index, for nested seed derivation
/// (e.g. sweep point -> trial).
inline std::uint64_t stream_child(std::uint64_t id, std::uint64_t index) {
  return splitmix64(id) ^ (index + 0x9e3779b97f4a7c15ULL);
}

/// Seeded generator. Every Monte Carlo task derives its own stream from
/// (master seed, task id), so results do not depend on scheduling or
/// worker count. Uniform doubles come from raw engine bits rather than
/// std distributions, pinning the byte stream across platforms.
class Rng {
 public:
  Rng(std::uint64_t master, std::uint64_t stream_id)
      : eng_(splitmix64(master ^ splitmix64(stream_id))) {}
  explicit Rng(std::uint64_t seed) : Rng(seed, 0) {}

  std::uint64_t next_u64() { return eng_(); }

  /// Uniform in [0,1).
  double next_double() { return double(eng_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t mask = ~std::uint64_t(0) >> std::countl_zero(n | 1);
    while (true) {
      std::uint64_t x = eng_() & mask;
      if (x < n) return x;
    }
  }

 private:
  std::mt19937_64 eng_;
};

/// Indices of the one-bits of a Bern(p)^N draw, by geometric skipping.
/// Expected cost O(pN), which keeps huge sparse inputs (2-SAT at
/// n=1600, N>5M) cheap to sample.
inline std::vector<std::uint32_t> sample_ones(Rng& rng, std::uint64_t width,
                                              double p) {
  std::vector<std::uint32_t> out;
  if (p <= 0.0 || width == 0) return out;
  if (p >= 1.0) {
    out.resize(width);
    for (std::uint64_t i = 0; i < width; ++i) out[i] = std::uint32_t(i);
    return out;
  }
  out.reserve(std::size_t(p * double(width) * 1.3) + 8);
  const double log1mp = std::log1p(-p);
  double pos = -1.0;
  while (true) {
    double u = 1.0 - rng.next_double();  // (0,1]
    pos += 1.0 + std::floor(std::log(u) / log1mp);
    if (pos >= double(width)) break;
    out.push_back(std::uint32_t(pos));
  }
  return out;
}

inline void sample_bits(Rng& rng, double p, Bits& out) {
  out.clear();
  for (auto i : sample_ones(rng, out.size(), p)) out.set(i);
}

/// Uniform k-subset of {0,..,n-1} (partial Fisher-Yates), sorted.
inline std::vector<std::uint32_t> sample_subset(Rng& rng, std::uint32_t n,
                                                std::uint32_t k) {
  std::vector<std::uint32_t> pool(n);
  for (std::uint32_t i = 0; i < n; ++i) pool[i] = i;
  for (std::uint32_t i = 0; i < k; ++i) {
    std::uint32_t j = i + std::uint32_t(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

}  // namespace sharplab
