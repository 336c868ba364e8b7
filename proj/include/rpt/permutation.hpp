#pragma once

#include <span>
#include <vector>

#include "rpt/random.hpp"
#include "rpt/types.hpp"

namespace rpt {

// A permutation of {0, ..., n-1} stored as an index array.
//
// Matrix convention: P[u, v] = 1 iff v == sigma(u), so that
//   apply(P, x)_u = sum_v P[u, v] x_v = x_{sigma(u)}.
// The composition compose(a, b) is the permutation whose matrix is P_a * P_b,
// i.e. u -> b(a(u)).
class Permutation {
 public:
  Permutation() = default;
  // Throws DimensionError unless `sigma` is a bijection on {0, ..., n-1}.
  explicit Permutation(std::vector<Index> sigma);

  static Permutation identity(Index n);
  static Permutation from_one_based(std::span<const Index> sigma);

  Index size() const noexcept { return static_cast<Index>(sigma_.size()); }
  Index operator[](Index u) const { return sigma_[static_cast<std::size_t>(u)]; }
  const std::vector<Index>& indices() const noexcept { return sigma_; }
  std::vector<Index> one_based() const;

  Permutation inverse() const;
  bool is_identity() const noexcept;
  Index fixed_points() const noexcept;  // equals tr(P)

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation&, const Permutation&) = default;

 private:
  std::vector<Index> sigma_;
};

Permutation compose(const Permutation& a, const Permutation& b);

Vector apply(const Permutation& p, const Vector& x);
Matrix apply_rows(const Permutation& p, const Matrix& m);

// Dense n x n matrix under the convention above. Oracle and test use only.
Matrix to_matrix(const Permutation& p);

// Fisher-Yates draw; every permutation of size n is equally likely.
Permutation uniform_random_permutation(Index n, SeededRng& rng);

}  // namespace rpt
