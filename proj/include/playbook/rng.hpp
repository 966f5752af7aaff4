#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace playbook {

/// splitmix64 step; also used to derive independent stream seeds.
inline uint64_t splitmix64(uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t hash_combine(uint64_t seed, uint64_t v) {
  uint64_t s = seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
  return splitmix64(s);
}

/// Deterministic RNG with explicit inverse-transform draws so that seeded
/// output is identical across platforms and standard-library versions.
class Rng {
 public:
  explicit Rng(uint64_t seed = 0) : state_(seed) {
    // warm up so that small seeds diverge immediately
    splitmix64(state_);
  }

  uint64_t next_u64() { return splitmix64(state_); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer in [0, n).
  int uniform_int(int n) { return static_cast<int>(next_u64() % static_cast<uint64_t>(n)); }

  bool bernoulli(double p) { return uniform01() < p; }

  /// Box-Muller; consumes two uniforms per pair, caches the second draw.
  double normal(double mean = 0.0, double stddev = 1.0) {
    if (has_spare_) {
      has_spare_ = false;
      return mean + stddev * spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return mean + stddev * r * std::cos(t);
  }

  double exponential(double mean) {
    double u = uniform01();
    if (u >= 1.0) u = 1.0 - 0x1.0p-53;
    return -mean * std::log1p(-u);
  }

  /// Knuth product method; fine for the small rates used here.
  int poisson(double rate) {
    if (rate <= 0.0) return 0;
    const double limit = std::exp(-rate);
    double prod = 1.0;
    int k = -1;
    do {
      ++k;
      prod *= uniform01();
    } while (prod > limit);
    return k;
  }

  /// Index draw proportional to non-negative weights.
  int categorical(const Eigen::VectorXd& weights) {
    const double total = weights.sum();
    double x = uniform01() * total;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
      x -= weights(i);
      if (x < 0.0) return static_cast<int>(i);
    }
    return static_cast<int>(weights.size() - 1);
  }

  /// Fisher-Yates; std::shuffle is avoided because its draws are
  /// implementation-defined.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(next_u64() % i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace playbook
