// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

#include "pingloc/types.hpp"

namespace pingloc {

// Explicit, seedable random source. Every stochastic operation takes one of
// these; nothing draws from hidden global state.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double normal() { return std::normal_distribution<double>{0.0, 1.0}(gen_); }

  // CN(0, var): real and imaginary parts are N(0, var/2).
  cd cnormal(double var = 1.0) {
    const double s = std::sqrt(var / 2.0);
    return {s * normal(), s * normal()};
  }

  double uniform(double a, double b) { return std::uniform_real_distribution<double>{a, b}(gen_); }

  std::uint64_t next_u64() { return gen_(); }

  int uniform_int(int a, int b) { return std::uniform_int_distribution<int>{a, b}(gen_); }

  std::mt19937_64& engine() { return gen_; }

 private:
  std::mt19937_64 gen_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Trial i at sweep point j draws its seed from the master seed alone, so the
// execution order of trials cannot change any result.
inline std::uint64_t fanout_seed(std::uint64_t master, std::uint64_t i, std::uint64_t j) {
  return splitmix64(splitmix64(splitmix64(master) ^ i) ^ (j * 0x9e3779b97f4a7c15ULL));
}

}  // namespace pingloc
