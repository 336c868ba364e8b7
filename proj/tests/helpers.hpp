#pragma once

#include "rpt/random.hpp"
#include "rpt/types.hpp"

namespace rpt::testing {

inline Matrix gaussian_matrix(Index rows, Index cols, std::uint64_t seed) {
  SeededRng rng(seed);
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.normal();
  }
  return m;
}

inline Vector gaussian_vector(Index n, std::uint64_t seed) {
  return gaussian_matrix(n, 1, seed).col(0);
}

inline double max_abs(const Matrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace rpt::testing
