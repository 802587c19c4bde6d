#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

#include "gait/stats.hpp"

namespace gait {

// All randomness in this project flows through Rng so that a given seed
// produces byte-identical results on every platform. mt19937_64 itself is
// pinned by the standard; the distributions in <random> are not, so the
// few we need are implemented here.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Uniform integer on [0, n), n > 0. Lemire's unbiased multiply-shift.
  std::uint64_t below(std::uint64_t n) {
    unsigned __int128 m = (unsigned __int128)next_u64() * n;
    auto lo = std::uint64_t(m);
    if (lo < n) {
      std::uint64_t threshold = (0 - n) % n;
      while (lo < threshold) {
        m = (unsigned __int128)next_u64() * n;
        lo = std::uint64_t(m);
      }
    }
    return std::uint64_t(m >> 64);
  }

  // Standard normal via the inverse CDF; uniform01 never returns 0 or 1 so
  // the quantile is always defined... except 0, guard it.
  double normal() {
    double u = uniform01();
    if (u <= 0.0) u = 0x1.0p-53;
    return stats::normal_quantile(u);
  }

  double normal(double mu, double sd) { return mu + sd * normal(); }

  double exponential(double mean) { return -mean * std::log1p(-uniform01()); }

  double lognormal(double mu_log, double sigma_log) {
    return std::exp(mu_log + sigma_log * normal());
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = std::size_t(below(i));
      using std::swap;
      swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 eng_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stable per-purpose sub-seed so independent streams never share state.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(splitmix64(base) ^ splitmix64(stream * 0x9e3779b97f4a7c15ULL + 1));
}

// FNV-1a, used to fold identifiers such as home ids into seed streams.
inline std::uint64_t hash_string(std::string_view s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace gait
