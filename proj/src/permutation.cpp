#include "rpt/permutation.hpp"

#include <string>
#include <utility>

#include "rpt/errors.hpp"

namespace rpt {

Permutation::Permutation(std::vector<Index> sigma) : sigma_(std::move(sigma)) {
  const auto n = sigma_.size();
  std::vector<bool> seen(n, false);
  for (Index v : sigma_) {
    if (v < 0 || static_cast<std::size_t>(v) >= n || seen[static_cast<std::size_t>(v)]) {
      throw DimensionError("permutation entry " + std::to_string(v) +
                           " is out of range or repeated");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(Index n) {
  std::vector<Index> sigma(static_cast<std::size_t>(n));
  for (Index u = 0; u < n; ++u) sigma[static_cast<std::size_t>(u)] = u;
  return Permutation(std::move(sigma));
}

Permutation Permutation::from_one_based(std::span<const Index> sigma) {
  std::vector<Index> zero_based(sigma.begin(), sigma.end());
  for (auto& v : zero_based) --v;
  return Permutation(std::move(zero_based));
}

std::vector<Index> Permutation::one_based() const {
  std::vector<Index> out(sigma_);
  for (auto& v : out) ++v;
  return out;
}

Permutation Permutation::inverse() const {
  std::vector<Index> inv(sigma_.size());
  for (std::size_t u = 0; u < sigma_.size(); ++u) {
    inv[static_cast<std::size_t>(sigma_[u])] = static_cast<Index>(u);
  }
  return Permutation(std::move(inv));
}

bool Permutation::is_identity() const noexcept { return fixed_points() == size(); }

Index Permutation::fixed_points() const noexcept {
  Index count = 0;
  for (std::size_t u = 0; u < sigma_.size(); ++u) {
    if (sigma_[u] == static_cast<Index>(u)) ++count;
  }
  return count;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) {
    throw DimensionError("compose: permutation sizes " + std::to_string(a.size()) +
                         " and " + std::to_string(b.size()) + " differ");
  }
  std::vector<Index> sigma(static_cast<std::size_t>(a.size()));
  for (Index u = 0; u < a.size(); ++u) sigma[static_cast<std::size_t>(u)] = b[a[u]];
  return Permutation(std::move(sigma));
}

Vector apply(const Permutation& p, const Vector& x) {
  if (p.size() != x.size()) {
    throw DimensionError("apply: permutation of size " + std::to_string(p.size()) +
                         " applied to vector of length " + std::to_string(x.size()));
  }
  Vector out(x.size());
  for (Index u = 0; u < x.size(); ++u) out[u] = x[p[u]];
  return out;
}

Matrix apply_rows(const Permutation& p, const Matrix& m) {
  if (p.size() != m.rows()) {
    throw DimensionError("apply_rows: permutation of size " + std::to_string(p.size()) +
                         " applied to matrix with " + std::to_string(m.rows()) + " rows");
  }
  return m(p.indices(), Eigen::all);
}

Matrix to_matrix(const Permutation& p) {
  Matrix dense = Matrix::Zero(p.size(), p.size());
  for (Index u = 0; u < p.size(); ++u) dense(u, p[u]) = 1.0;
  return dense;
}

Permutation uniform_random_permutation(Index n, SeededRng& rng) {
  std::vector<Index> sigma(static_cast<std::size_t>(n));
  for (Index u = 0; u < n; ++u) sigma[static_cast<std::size_t>(u)] = u;
  for (Index i = n - 1; i > 0; --i) {
    const Index j = rng.uniform_index(i + 1);
    std::swap(sigma[static_cast<std::size_t>(i)], sigma[static_cast<std::size_t>(j)]);
  }
  return Permutation(std::move(sigma));
}

}  // namespace rpt
