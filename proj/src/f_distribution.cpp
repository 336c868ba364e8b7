#include <cmath>
#include <limits>
#include <string>

#include "rpt/errors.hpp"
#include "rpt/hypothesis_tests.hpp"

namespace rpt {

namespace {

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double x, double a, double b) {
  constexpr int kMaxIter = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw NumericalError("incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("regularized_beta: a and b must be positive");
  if (std::isnan(x)) throw DomainError("regularized_beta: x is NaN");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(x, a, b) / a;
  }
  return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double f_cdf(double x, Index d1, Index d2) {
  if (d1 < 1 || d2 < 1) throw DomainError("f_cdf: degrees of freedom must be positive");
  if (std::isnan(x) || x < 0.0) throw DomainError("f_cdf: x must be nonnegative");
  if (std::isinf(x)) return 1.0;
  const double u = static_cast<double>(d1) * x;
  return regularized_beta(u / (u + static_cast<double>(d2)), d1 / 2.0, d2 / 2.0);
}

double f_sf(double x, Index d1, Index d2) {
  if (d1 < 1 || d2 < 1) throw DomainError("f_sf: degrees of freedom must be positive");
  if (std::isnan(x) || x < 0.0) throw DomainError("f_sf: x must be nonnegative");
  if (std::isinf(x)) return 0.0;
  const double u = static_cast<double>(d1) * x;
  const double w = static_cast<double>(d2);
  return regularized_beta(w / (w + u), d2 / 2.0, d1 / 2.0);
}

}  // namespace rpt
