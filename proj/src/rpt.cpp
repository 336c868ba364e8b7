#include <algorithm>
#include <cmath>
#include <string>

#include "rpt/errors.hpp"
#include "rpt/hypothesis_tests.hpp"

namespace rpt {

namespace {

// Smallest admissible Cholesky pivot of I - M'M (a squared sine of a
// principal angle between span(A_0) and P_k span(A_0)). Below it the
// comparison subspace is formed explicitly.
constexpr double kSchurPivotFloor = 1e-8;

void check_combiner_inputs(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw DimensionError("p-value combiner: a and b differ in length");
  if (a.empty()) throw DimensionError("p-value combiner: K must be at least 1");
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] < 0.0 || b[k] < 0.0 || std::isnan(a[k]) || std::isnan(b[k])) {
      throw DomainError("p-value combiner: statistics must be nonnegative");
    }
  }
}

void check_regime(Index n, Index p) {
  if (2 * p >= n) {
    throw RegimeError("RPT needs p < n/2 (n = " + std::to_string(n) + ", p = " +
                      std::to_string(p) + "); the naive RPT covers n/2 <= p < n");
  }
}

Matrix stacked(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

}  // namespace

double rpt_pvalue(std::span<const double> a, std::span<const double> b) {
  check_combiner_inputs(a, b);
  const double min_a = *std::min_element(a.begin(), a.end());
  const auto count = std::count_if(b.begin(), b.end(), [&](double bk) { return min_a <= bk; });
  return static_cast<double>(1 + count) / static_cast<double>(a.size() + 1);
}

double rpt_em_pvalue(std::span<const double> a, std::span<const double> b) {
  check_combiner_inputs(a, b);
  std::size_t count = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] <= b[k]) ++count;
  }
  return static_cast<double>(1 + count) / static_cast<double>(a.size() + 1);
}

RptPlan::RptPlan(const Matrix& x, PermutationSet set)
    : n_(x.rows()), p_(x.cols()), set_(std::move(set)) {
  require_finite(x, "X");
  check_regime(n_, p_);
  if (set_.n() != n_) throw DimensionError("RptPlan: permutation set size differs from n");
  if (set_.size() < 1) throw DimensionError("RptPlan: K must be at least 1");

  v0_ = orthonormal_null_basis(x, n_ - p_);
  a0_ = complement_basis(v0_);
  const Matrix& a0 = a0_.columns();

  per_k_.reserve(static_cast<std::size_t>(set_.size()));
  for (const auto& perm : set_.perms()) {
    PerPermutation entry{perm.inverse(), std::nullopt, std::nullopt};
    const Matrix c = apply_rows(perm, a0);
    const Matrix m = a0.transpose() * c;
    Matrix schur = Matrix::Identity(p_, p_);
    schur.selfadjointView<Eigen::Lower>().rankUpdate(m.transpose(), -1.0);
    Eigen::LLT<Matrix> llt(schur);
    const bool usable = llt.info() == Eigen::Success &&
                        (p_ == 0 || llt.matrixLLT().diagonal().cwiseAbs2().minCoeff() >
                                        kSchurPivotFloor);
    if (usable) {
      entry.schur = std::move(llt);
    } else {
      entry.explicit_basis = orthonormal_null_basis(stacked(a0, c), n_ - 2 * p_);
    }
    per_k_.push_back(std::move(entry));
  }
}

OrthonormalBasis RptPlan::comparison_basis(Index k) const {
  if (k < 1 || k > set_.size()) throw DimensionError("comparison_basis: k out of range");
  const Matrix& a0 = a0_.columns();
  return orthonormal_null_basis(stacked(a0, apply_rows(set_[k - 1], a0)), n_ - 2 * p_);
}

RptResult RptPlan::evaluate(const Vector& z, const Vector& y) const {
  if (z.size() != n_ || y.size() != n_) {
    throw DimensionError("RPT: Z and Y must have length n = " + std::to_string(n_));
  }
  require_finite(z, "Z");
  require_finite(y, "Y");

  const Matrix& a0 = a0_.columns();
  auto residual = [&](const Vector& v) -> Vector { return v - a0 * (a0.transpose() * v); };
  const Vector r_z = residual(z);
  const Vector r_y = residual(y);
  const double zy = r_z.dot(r_y);

  RptResult out;
  out.k_count = set_.size();
  out.permset_diagnostics = set_.diagnostics();
  out.a.reserve(static_cast<std::size_t>(out.k_count));
  out.b.reserve(static_cast<std::size_t>(out.k_count));

  for (Index k = 0; k < set_.size(); ++k) {
    const Permutation& perm = set_[k];
    const PerPermutation& entry = per_k_[static_cast<std::size_t>(k)];
    const Vector py = apply(perm, y);
    if (entry.schur) {
      const Vector r_py = residual(py);
      // C'r = A_0' P^{-1} r
      const Vector cz = a0.transpose() * apply(entry.inverse, r_z);
      const Vector cy = a0.transpose() * apply(entry.inverse, r_y);
      const Vector cpy = a0.transpose() * apply(entry.inverse, r_py);
      const Vector s = entry.schur->solve(cz);
      out.a.push_back(std::abs(zy - s.dot(cy)));
      out.b.push_back(std::abs(r_z.dot(r_py) - s.dot(cpy)));
    } else {
      const OrthonormalBasis& vt = *entry.explicit_basis;
      const Vector tz = vt.coordinates(z);
      out.a.push_back(std::abs(tz.dot(vt.coordinates(y))));
      out.b.push_back(std::abs(tz.dot(vt.coordinates(py))));
      ++out.explicit_fallbacks;
    }
  }

  out.phi = rpt_pvalue(out.a, out.b);
  out.phi_em = rpt_em_pvalue(out.a, out.b);
  out.degenerate = *std::min_element(out.a.begin(), out.a.end()) == 0.0 &&
                   std::all_of(out.b.begin(), out.b.end(), [](double v) { return v == 0.0; });
  return out;
}

RptResult residual_permutation_test(const Matrix& x, const Vector& z, const Vector& y,
                                    Index k_count, Index max_loops, SeededRng& rng) {
  check_regime(x.rows(), x.cols());
  if (z.size() != x.rows() || y.size() != x.rows()) {
    throw DimensionError("RPT: X, Z and Y must have the same number of rows");
  }
  PermutationSet set = construct_permutation_set(x, k_count, max_loops, rng);
  return RptPlan(x, std::move(set)).evaluate(z, y);
}

}  // namespace rpt
