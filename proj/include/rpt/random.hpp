#pragma once

#include <cstdint>
#include <random>

#include "rpt/types.hpp"

namespace rpt {

// Seeded random stream. Two handles built from the same seed produce the
// same sequence. derive(i) gives a sub-stream that depends only on (seed, i),
// never on how much of the parent stream has been consumed, so Monte Carlo
// replicate r can be reproduced in isolation and in any order.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed);

  std::uint64_t seed() const noexcept { return seed_; }
  SeededRng derive(std::uint64_t stream) const;

  double normal();
  double uniform();  // [0, 1)
  Index uniform_index(Index bound);  // {0, ..., bound - 1}

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

}  // namespace rpt
