#include "rpt/oracle.hpp"

#include <cmath>
#include <vector>

#include "rpt/errors.hpp"
#include "rpt/hypothesis_tests.hpp"

namespace rpt::oracle {

namespace {

double statistic(const Vector& u, const Vector& v) { return std::abs(u.dot(v)); }

}  // namespace

double rpt_pvalue_via_original(const Matrix& x, const Vector& z, const Vector& y,
                               const PermutationSet& set) {
  const Index n = x.rows();
  const Index p = x.cols();
  if (2 * p >= n) throw RegimeError("oracle: needs p < n/2");
  if (set.n() != n) throw DimensionError("oracle: permutation set size differs from n");

  const Matrix v0 = orthonormal_null_basis(x, n - p).columns();
  const Vector e_hat = v0.transpose() * z;
  const Vector eps_hat = v0.transpose() * y;
  const Matrix identity = Matrix::Identity(n, n);
  const Matrix off_v0 = identity - v0 * v0.transpose();

  std::vector<Matrix> vtilde;
  std::vector<Matrix> vk;
  for (const auto& perm : set.perms()) {
    const Matrix dense = to_matrix(perm);
    vk.push_back(dense * v0);
    const Matrix off_vk = identity - vk.back() * vk.back().transpose();
    Matrix both(n, 2 * n);
    both << off_v0, off_vk;
    vtilde.push_back(orthonormal_null_basis(both, n - 2 * p).columns());
  }

  const Index k_count = set.size();
  double min_a = INFINITY;
  for (Index j = 0; j < k_count; ++j) {
    const Matrix& vt = vtilde[static_cast<std::size_t>(j)];
    min_a = std::min(min_a, statistic(vt.transpose() * v0 * e_hat, vt.transpose() * v0 * eps_hat));
  }
  Index count = 0;
  for (Index k = 0; k < k_count; ++k) {
    const Matrix& vt = vtilde[static_cast<std::size_t>(k)];
    const double bk = statistic(vt.transpose() * v0 * e_hat,
                                vt.transpose() * vk[static_cast<std::size_t>(k)] * eps_hat);
    if (min_a <= bk) ++count;
  }
  return static_cast<double>(1 + count) / static_cast<double>(k_count + 1);
}

bool check_intersection(const Matrix& v0, const Matrix& vk, const Matrix& vtilde) {
  if (v0.rows() != vtilde.rows() || vk.rows() != vtilde.rows()) return false;
  for (Index j = 0; j < vtilde.cols(); ++j) {
    const Vector c = vtilde.col(j);
    if ((v0 * (v0.transpose() * c) - c).norm() >= 1e-8) return false;
    if ((vk * (vk.transpose() * c) - c).norm() >= 1e-8) return false;
  }
  return true;
}

RateEstimate exchangeability_rank_check(const std::function<double(const Vector&)>& g,
                                        const PermutationSet& set, NoiseLaw law, Index reps,
                                        double alpha, SeededRng& rng) {
  if (!verify_group_closure(set)) {
    throw ClosureError("permutation set together with the identity is not a group");
  }
  if (reps < 1) throw DimensionError("exchangeability_rank_check: reps must be positive");
  std::vector<Matrix> dense;
  for (const auto& perm : set.perms()) dense.push_back(to_matrix(perm));

  const Index k_count = set.size();
  Index rejections = 0;
  for (Index r = 0; r < reps; ++r) {
    const Vector eps = sample_noise(law, set.n(), rng);
    const double observed = g(eps);
    Index count = 0;
    for (const auto& pk : dense) {
      if (observed <= g(pk * eps)) ++count;
    }
    const double p_value = static_cast<double>(1 + count) / static_cast<double>(k_count + 1);
    if (p_value <= alpha) ++rejections;
  }
  RateEstimate est;
  est.reps = reps;
  est.rate = static_cast<double>(rejections) / static_cast<double>(reps);
  est.std_error = std::sqrt(est.rate * (1.0 - est.rate) / static_cast<double>(reps));
  return est;
}

}  // namespace rpt::oracle
