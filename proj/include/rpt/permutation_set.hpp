#pragma once

#include <iosfwd>
#include <vector>

#include "rpt/linalg.hpp"
#include "rpt/permutation.hpp"
#include "rpt/random.hpp"

namespace rpt {

// Per-permutation trace values recorded while building a set.
struct TraceDiagnostics {
  std::vector<Index> perm_trace;   // tr(P_k), k = 1..K
  std::vector<double> hat_trace;   // tr(H P_k); empty when no design was given
  double threshold = 0.0;          // sqrt(2) * K * sqrt(p)
  bool criterion_met = false;      // every |tr(H P_k)| <= threshold
  Index attempts = 0;              // shuffles drawn
  double hat_trace_abs_sum() const;
};

// {P_1, ..., P_K} over {0..n-1}; the identity P_0 is implicit.
class PermutationSet {
 public:
  PermutationSet(Index n, std::vector<Permutation> perms, TraceDiagnostics diagnostics = {});

  Index n() const noexcept { return n_; }
  Index size() const noexcept { return static_cast<Index>(perms_.size()); }
  const Permutation& operator[](Index k) const { return perms_[static_cast<std::size_t>(k)]; }
  const std::vector<Permutation>& perms() const noexcept { return perms_; }
  const TraceDiagnostics& diagnostics() const noexcept { return diagnostics_; }

 private:
  Index n_;
  std::vector<Permutation> perms_;
  TraceDiagnostics diagnostics_;
};

// Block-cyclic group: P_k has (u, v) = 1 iff ceil(pi(u)/(K+1)) == ceil(pi(v)/(K+1))
// and pi(u) - pi(v) in {k, k - (K+1)} (pi taken 1-based). Element k of the
// result is P_{k+1}. Throws DivisibilityError unless (K+1) | n.
PermutationSet block_cyclic_set(Index n, Index k_count, const Permutation& pi);

// Repeats up to `max_loops` times: shuffle, build block_cyclic_set, accept when
// |tr(H P_k)| <= sqrt(2) K sqrt(p) for every k. Without an accepted draw the
// candidate with the smallest sum_k |tr(H P_k)| is returned (first one on ties).
PermutationSet construct_permutation_set(const Matrix& x, Index k_count, Index max_loops,
                                         SeededRng& rng);

// True iff {I, P_1, ..., P_K} is closed under composition.
bool verify_group_closure(const PermutationSet& set);

// One line per permutation, 1-based indices separated by single spaces.
void write_permutation_set(std::ostream& os, const PermutationSet& set);

}  // namespace rpt
