#include <cmath>
#include <string>

#include "rpt/errors.hpp"
#include "rpt/hypothesis_tests.hpp"

namespace rpt {

namespace {

OrthonormalBasis residual_basis(const Matrix& x) {
  if (x.cols() >= x.rows()) {
    throw DimensionError("naive RPT needs p < n (n = " + std::to_string(x.rows()) +
                         ", p = " + std::to_string(x.cols()) + ")");
  }
  return orthonormal_null_basis(x, x.rows() - x.cols());
}

}  // namespace

NaiveResidualTest::NaiveResidualTest(const Matrix& x) : v0_(residual_basis(x)) {}

double NaiveResidualTest::p_value(const Vector& z, const Vector& y, Index k_count,
                                  SeededRng& rng) const {
  if (k_count < 1) throw DimensionError("naive RPT: K must be at least 1");
  require_finite(z, "Z");
  require_finite(y, "Y");
  const Vector e_hat = v0_.coordinates(z);
  const Vector eps_hat = v0_.coordinates(y);
  const Index m = e_hat.size();
  const double observed = std::abs(e_hat.dot(eps_hat));

  Index count = 0;
  for (Index k = 0; k < k_count; ++k) {
    const Permutation perm = uniform_random_permutation(m, rng);
    double s = 0.0;
    for (Index u = 0; u < m; ++u) s += e_hat[u] * eps_hat[perm[u]];
    if (observed <= std::abs(s)) ++count;
  }
  return static_cast<double>(1 + count) / static_cast<double>(k_count + 1);
}

double naive_rpt(const Matrix& x, const Vector& z, const Vector& y, Index k_count,
                 SeededRng& rng) {
  if (z.size() != x.rows() || y.size() != x.rows()) {
    throw DimensionError("naive RPT: X, Z and Y must have the same number of rows");
  }
  return NaiveResidualTest(x).p_value(z, y, k_count, rng);
}

}  // namespace rpt
