#pragma once

#include <array>
#include <cstdint>

#include "rgm/tensor.hpp"

namespace rgm {

// Deterministic random source: xoshiro256++ seeded through splitmix64.
// The same seed always reproduces the same draw sequence, and split()
// derives an independent child stream without disturbing the parent's
// future draws beyond the one derivation step.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();
  // Uniform in [0, 1) with 53 random bits.
  double uniform();
  // Standard normal via Box-Muller (one value per call).
  double gaussian();
  // Uniform integer in [0, n), rejection-sampled so every value is equally likely.
  std::uint64_t uniform_index(std::uint64_t n);

  Rng split();

  std::uint64_t seed() const { return seed_; }
  std::array<std::uint64_t, 4> state_words() const { return s_; }
  std::uint64_t draw_count() const { return draws_; }
  void restore(const std::array<std::uint64_t, 4>& words, std::uint64_t draws) {
    s_ = words;
    draws_ = draws;
  }

 private:
  std::array<std::uint64_t, 4> s_{};
  std::uint64_t seed_ = 0;
  std::uint64_t draws_ = 0;
};

// i.i.d. N(0,1) entries; dim must be >= 1.
Tensor gaussian_vector(std::size_t dim, Rng& rng);
// n x dim matrix of i.i.d. N(0,1), filled row by row.
Tensor gaussian_matrix(std::size_t n, std::size_t dim, Rng& rng);

}  // namespace rgm
