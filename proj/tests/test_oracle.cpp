#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "rpt/errors.hpp"
#include "rpt/hypothesis_tests.hpp"
#include "rpt/oracle.hpp"

using namespace rpt;
using rpt::testing::gaussian_matrix;
using rpt::testing::gaussian_vector;
using rpt::testing::max_abs;

TEST_CASE("projector form agrees with the residual-coordinate form") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Matrix x = gaussian_matrix(12, 2, 1000 + seed);
    const Vector z = x.col(0) + gaussian_vector(12, 2000 + seed);
    const Vector y = 0.3 * z + gaussian_vector(12, 3000 + seed);
    SeededRng rng(seed);
    const RptPlan plan(x, construct_permutation_set(x, 3, 1, rng));
    CHECK(plan.evaluate(z, y).phi == oracle::rpt_pvalue_via_original(x, z, y, plan.permutation_set()));
  }
}

TEST_CASE("comparison bases lie in both residual spaces") {
  const Matrix x = gaussian_matrix(20, 3, 11);
  SeededRng rng(2);
  const RptPlan plan(x, construct_permutation_set(x, 4, 1, rng));
  const Matrix v0 = plan.v0().columns();
  for (Index k = 1; k <= 4; ++k) {
    const Matrix vk = apply_rows(plan.permutation_set()[k - 1], v0);
    const Matrix vt = plan.comparison_basis(k).columns();
    CHECK(oracle::check_intersection(v0, vk, vt));
    CHECK(max_abs(vt.transpose() * x) < 1e-9);
    CHECK(max_abs(vt.transpose() * apply_rows(plan.permutation_set()[k - 1], x)) < 1e-9);
  }
}

TEST_CASE("check_intersection") {
  const Matrix e = Matrix::Identity(4, 4);
  const Matrix v0 = e.leftCols(3);
  const Matrix vk = e.rightCols(3);
  CHECK(oracle::check_intersection(v0, vk, e.middleCols(1, 2)));
  CHECK_FALSE(oracle::check_intersection(v0, vk, e.leftCols(1)));
  CHECK_FALSE(oracle::check_intersection(v0, vk, e.rightCols(1)));
}

TEST_CASE("exchangeability_rank_check") {
  const Index n = 12;
  const PermutationSet set = block_cyclic_set(n, 3, Permutation::identity(n));
  auto first = [](const Vector& v) { return v[0]; };
  SUBCASE("valid level for a group") {
    SeededRng rng(3);
    const oracle::RateEstimate r =
        oracle::exchangeability_rank_check(first, set, NoiseLaw::gaussian, 4000, 0.25, rng);
    CHECK(r.reps == 4000);
    CHECK(r.rate <= 0.25 + 3 * r.std_error);
    CHECK(r.rate >= 0.25 - 3 * r.std_error);
  }
  SUBCASE("alpha below 1 / (K + 1) never rejects") {
    SeededRng rng(3);
    const oracle::RateEstimate r =
        oracle::exchangeability_rank_check(first, set, NoiseLaw::t1, 500, 0.2, rng);
    CHECK(r.rate == 0.0);
  }
  SUBCASE("constant statistic never rejects") {
    SeededRng rng(3);
    const oracle::RateEstimate r = oracle::exchangeability_rank_check(
        [](const Vector&) { return 1.0; }, set, NoiseLaw::gaussian, 200, 0.5, rng);
    CHECK(r.rate == 0.0);
  }
  SUBCASE("non-group set") {
    const Permutation swap = Permutation::from_one_based(std::vector<Index>{2, 1, 3, 4, 5, 6});
    const Permutation cyc = Permutation::from_one_based(std::vector<Index>{1, 2, 4, 5, 3, 6});
    const PermutationSet bad(6, {swap, cyc});
    SeededRng rng(3);
    CHECK_THROWS_AS(oracle::exchangeability_rank_check(first, bad, NoiseLaw::gaussian, 10, 0.5, rng),
                    ClosureError);
  }
}
