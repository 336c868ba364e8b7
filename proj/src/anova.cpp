#include <algorithm>
#include <string>

#include "rpt/errors.hpp"
#include "rpt/hypothesis_tests.hpp"

namespace rpt {

AnovaResult anova_test(const Matrix& x, const Vector& z, const Vector& y) {
  const Index n = x.rows();
  const Index p = x.cols();
  if (z.size() != n || y.size() != n) {
    throw DimensionError("anova_test: X, Z and Y must have the same number of rows");
  }
  if (n <= p + 1) {
    throw RegimeError("anova_test needs n > p + 1 (n = " + std::to_string(n) +
                      ", p = " + std::to_string(p) + ")");
  }
  require_finite(z, "Z");
  require_finite(y, "Y");

  const Factorization reduced(x);
  Matrix xz(n, p + 1);
  xz << x, z;
  const Factorization full(xz);
  if (full.rank() <= reduced.rank()) {
    throw RankError("Z lies in the column span of X; its coefficient is not identifiable");
  }

  const double rss_reduced = reduced.rotate(y).tail(reduced.null_dim()).squaredNorm();
  const double rss_full = full.rotate(y).tail(full.null_dim()).squaredNorm();
  if (rss_full < 1e-12 * y.squaredNorm()) {
    throw DegenerateError("Y lies in span(X, Z); the residual sum of squares vanishes");
  }

  AnovaResult r;
  r.df1 = 1;
  r.df2 = n - p - 1;
  r.f_stat = std::max(0.0, rss_reduced - rss_full) / (rss_full / static_cast<double>(r.df2));
  r.p_value = f_sf(r.f_stat, r.df1, r.df2);
  return r;
}

}  // namespace rpt
