#pragma once

#include <cstdint>
#include <random>
#include <string>

namespace clover::util {

// Derives decorrelated sub-seeds from a master seed so that every scene,
// candidate, and trial draws from its own stream. Results are then
// independent of evaluation order and thread count.
inline std::uint64_t mix_seed(std::uint64_t state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t sub_seed(std::uint64_t master, std::uint64_t a) {
  return mix_seed(master ^ mix_seed(a));
}

inline std::uint64_t sub_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return sub_seed(sub_seed(master, a), b);
}

inline std::uint64_t hash_string(const std::string& s) {
  // FNV-1a, also used for score-cache keys.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t sub_seed(std::uint64_t master, const std::string& a, std::uint64_t b) {
  return sub_seed(master, hash_string(a), b);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  // Uniform integer in [lo, hi] inclusive.
  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(engine_);
  }

  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return std::bernoulli_distribution(p)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace clover::util
