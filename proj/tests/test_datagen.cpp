#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "helpers.hpp"
#include "rpt/datagen.hpp"
#include "rpt/errors.hpp"

using namespace rpt;
using rpt::testing::max_abs;

namespace {

double quantile(Vector v, double q) {
  std::sort(v.data(), v.data() + v.size());
  return v[static_cast<Index>(q * static_cast<double>(v.size() - 1))];
}

}  // namespace

TEST_CASE("noise laws") {
  SeededRng rng(12);
  const Index m = 200000;
  SUBCASE("gaussian moments") {
    const Vector v = sample_noise(NoiseLaw::gaussian, m, rng);
    CHECK(std::abs(v.mean()) < 0.01);
    CHECK(std::abs(v.squaredNorm() / m - 1.0) < 0.02);
  }
  SUBCASE("t1 quartiles are +-1") {
    const Vector v = sample_noise(NoiseLaw::t1, m, rng);
    CHECK(std::abs(quantile(v, 0.75) - 1.0) < 0.03);
    CHECK(std::abs(quantile(v, 0.25) + 1.0) < 0.03);
    CHECK(std::abs(quantile(v, 0.5)) < 0.02);
  }
  SUBCASE("t2 upper quartile") {
    // F(t) = 1/2 + t / (2 sqrt(2 + t^2)) = 3/4 at t = sqrt(2/3)
    const Vector v = sample_noise(NoiseLaw::t2, m, rng);
    CHECK(std::abs(quantile(v, 0.75) - std::sqrt(2.0 / 3.0)) < 0.02);
    CHECK(std::abs(quantile(v, 0.5)) < 0.02);
  }
  SUBCASE("names") {
    for (NoiseLaw law : {NoiseLaw::gaussian, NoiseLaw::t1, NoiseLaw::t2}) {
      CHECK(parse_noise_law(to_string(law)) == law);
    }
    CHECK(parse_noise_law("cauchy") == NoiseLaw::t1);
    CHECK_THROWS_AS(parse_noise_law("t3"), ConfigError);
  }
}

TEST_CASE("toeplitz_sqrt") {
  const Matrix s = toeplitz_sqrt(5);
  const Matrix sigma = s * s;
  CHECK(max_abs(s - s.transpose()) < 1e-14);
  CHECK(sigma(0, 0) == doctest::Approx(1.0));
  CHECK(sigma(0, 1) == doctest::Approx(0.5));
  CHECK(sigma(0, 2) == doctest::Approx(0.25));
  for (Index j = 0; j < 5; ++j) {
    for (Index k = 0; k < 5; ++k) {
      CHECK(std::abs(sigma(j, k) - std::pow(2.0, -std::abs(j - k))) < 1e-12);
    }
  }
}

TEST_CASE("design rows have the Toeplitz covariance") {
  ModelConfig cfg;
  cfg.n = 20000;
  cfg.p = 3;
  SeededRng rng(4);
  const Matrix x = DataGenerator(cfg).design(rng);
  const Matrix cov = x.transpose() * x / static_cast<double>(cfg.n);
  CHECK(std::abs(cov(0, 0) - 1.0) < 0.05);
  CHECK(std::abs(cov(0, 1) - 0.5) < 0.05);
  CHECK(std::abs(cov(0, 2) - 0.25) < 0.05);
}

TEST_CASE("default coefficients") {
  CHECK(default_coefficients(100).norm() == doctest::Approx(1.0));
  CHECK(default_coefficients(100).tail(90).isZero());
  CHECK(default_coefficients(4).norm() == doctest::Approx(std::sqrt(0.4)));
}

TEST_CASE("generate_dataset") {
  ModelConfig cfg;
  cfg.n = 40;
  cfg.p = 5;
  SUBCASE("deterministic per seed") {
    SeededRng a(9);
    SeededRng b(9);
    SeededRng c(10);
    const Dataset d1 = generate_dataset(cfg, a);
    const Dataset d2 = generate_dataset(cfg, b);
    const Dataset d3 = generate_dataset(cfg, c);
    CHECK(d1.x == d2.x);
    CHECK(d1.y == d2.y);
    CHECK(d1.z == d2.z);
    CHECK(d1.y != d3.y);
  }
  SUBCASE("null model with zero coefficients gives Y = eps") {
    cfg.beta = Vector::Zero(5);
    SeededRng a(3);
    const Dataset d = generate_dataset(cfg, a);
    SeededRng b(3);
    const DataGenerator gen(cfg);
    const Matrix x = gen.design(b);
    sample_noise(cfg.z_noise_law, cfg.n, b);
    const Vector eps = sample_noise(cfg.noise_law, cfg.n, b);
    CHECK(d.x == x);
    CHECK(max_abs(d.y - eps) == 0.0);
  }
  SUBCASE("Y - X beta - b Z is the noise draw") {
    cfg.b = 1.7;
    SeededRng a(3);
    const Dataset d = generate_dataset(cfg, a);
    SeededRng b(3);
    DataGenerator(cfg).design(b);
    const Vector e = sample_noise(cfg.z_noise_law, cfg.n, b);
    const Vector eps = sample_noise(cfg.noise_law, cfg.n, b);
    const Vector beta = default_coefficients(5);
    CHECK(max_abs(d.z - d.x * beta - e) < 1e-12);
    CHECK(max_abs(d.y - d.x * beta - 1.7 * d.z - eps) < 1e-12);
  }
  SUBCASE("validation") {
    cfg.p = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg.p = 5;
    cfg.beta = Vector::Ones(4);
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
  }
}

TEST_CASE("rows_to_drop and without_rows") {
  SeededRng rng(1);
  CHECK(rows_to_drop(12, 3, rng).empty());
  const auto d = rows_to_drop(103, 9, rng);
  CHECK(d.size() == 3);
  CHECK(std::is_sorted(d.begin(), d.end()));
  CHECK(std::adjacent_find(d.begin(), d.end()) == d.end());

  Dataset full{Matrix(5, 1), Vector(5), Vector(5)};
  full.x.col(0) << 0, 1, 2, 3, 4;
  full.z << 10, 11, 12, 13, 14;
  full.y << 20, 21, 22, 23, 24;
  const Dataset kept = without_rows(full, {1, 4});
  CHECK(kept.x.col(0) == Vector(Eigen::Vector3d(0, 2, 3)));
  CHECK(kept.z == Vector(Eigen::Vector3d(10, 12, 13)));
  CHECK(kept.y == Vector(Eigen::Vector3d(20, 22, 23)));

  // every row is dropped with equal frequency
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 70000; ++i) {
    for (Index r : rows_to_drop(7, 2, rng)) ++hits[static_cast<std::size_t>(r)];
  }
  for (int h : hits) CHECK(std::abs(h / 70000.0 - 1.0 / 7) < 0.01);
}
