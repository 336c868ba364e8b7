#include "rpt/permutation_set.hpp"

#include <cmath>
#include <optional>
#include <ostream>
#include <set>
#include <string>

#include "rpt/errors.hpp"

namespace rpt {

double TraceDiagnostics::hat_trace_abs_sum() const {
  double sum = 0.0;
  for (double t : hat_trace) sum += std::abs(t);
  return sum;
}

PermutationSet::PermutationSet(Index n, std::vector<Permutation> perms,
                               TraceDiagnostics diagnostics)
    : n_(n), perms_(std::move(perms)), diagnostics_(std::move(diagnostics)) {
  for (const auto& p : perms_) {
    if (p.size() != n_) throw DimensionError("permutation set: member has wrong size");
  }
}

PermutationSet block_cyclic_set(Index n, Index k_count, const Permutation& pi) {
  if (k_count < 1) throw DimensionError("block_cyclic_set: K must be at least 1");
  if (pi.size() != n) throw DimensionError("block_cyclic_set: pi has wrong length");
  const Index group = k_count + 1;
  if (n % group != 0) {
    throw DivisibilityError("n = " + std::to_string(n) + " is not divisible by K + 1 = " +
                            std::to_string(group));
  }
  // Working with 0-based ranks r = pi(u) - 1, the rule reads: same block
  // r / (K+1), and offset(v) = offset(u) - k mod (K+1).
  const Permutation pi_inv = pi.inverse();
  std::vector<Permutation> perms;
  TraceDiagnostics diag;
  perms.reserve(static_cast<std::size_t>(k_count));
  for (Index k = 1; k <= k_count; ++k) {
    std::vector<Index> sigma(static_cast<std::size_t>(n));
    for (Index u = 0; u < n; ++u) {
      const Index r = pi[u];
      const Index block_start = (r / group) * group;
      const Index offset = ((r % group) - k + group) % group;
      sigma[static_cast<std::size_t>(u)] = pi_inv[block_start + offset];
    }
    perms.emplace_back(std::move(sigma));
    diag.perm_trace.push_back(perms.back().fixed_points());
  }
  return PermutationSet(n, std::move(perms), std::move(diag));
}

PermutationSet construct_permutation_set(const Matrix& x, Index k_count, Index max_loops,
                                         SeededRng& rng) {
  if (max_loops < 1) throw DimensionError("construct_permutation_set: T must be at least 1");
  if (k_count < 1) throw DimensionError("construct_permutation_set: K must be at least 1");
  const Index n = x.rows();
  if (n % (k_count + 1) != 0) {
    throw DivisibilityError("n = " + std::to_string(n) + " is not divisible by K + 1 = " +
                            std::to_string(k_count + 1));
  }
  const OrthonormalBasis range = column_space_basis(x);
  const double threshold = std::sqrt(2.0) * static_cast<double>(k_count) *
                           std::sqrt(static_cast<double>(x.cols()));

  std::optional<PermutationSet> best;
  double best_sum = 0.0;
  Index attempts = 0;
  while (attempts < max_loops) {
    ++attempts;
    const Permutation pi = uniform_random_permutation(n, rng);
    const PermutationSet candidate = block_cyclic_set(n, k_count, pi);

    TraceDiagnostics diag = candidate.diagnostics();
    diag.threshold = threshold;
    diag.criterion_met = true;
    for (const auto& p : candidate.perms()) {
      const double t = hat_trace(range, p);
      diag.hat_trace.push_back(t);
      if (std::abs(t) > threshold) diag.criterion_met = false;
    }
    const double sum = diag.hat_trace_abs_sum();
    const bool accepted = diag.criterion_met;
    if (accepted || !best || sum < best_sum) {
      best.emplace(n, candidate.perms(), std::move(diag));
      best_sum = sum;
    }
    if (accepted) break;
  }
  TraceDiagnostics diag = best->diagnostics();
  diag.attempts = attempts;
  return PermutationSet(n, best->perms(), std::move(diag));
}

bool verify_group_closure(const PermutationSet& set) {
  std::vector<Permutation> members;
  members.reserve(static_cast<std::size_t>(set.size() + 1));
  members.push_back(Permutation::identity(set.n()));
  for (const auto& p : set.perms()) members.push_back(p);
  const std::set<Permutation> lookup(members.begin(), members.end());
  for (const auto& a : members) {
    for (const auto& b : members) {
      if (!lookup.contains(compose(a, b))) return false;
    }
  }
  return true;
}

void write_permutation_set(std::ostream& os, const PermutationSet& set) {
  for (const auto& p : set.perms()) {
    const auto idx = p.one_based();
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i > 0) os << ' ';
      os << idx[i];
    }
    os << '\n';
  }
}

}  // namespace rpt
