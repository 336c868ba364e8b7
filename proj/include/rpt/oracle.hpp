#pragma once

#include <functional>

#include "rpt/datagen.hpp"
#include "rpt/linalg.hpp"
#include "rpt/permutation_set.hpp"

namespace rpt::oracle {

// Brute-force cross-checks. Everything here uses dense permutation matrices
// and explicit projectors; none of it shares the fast path in RptPlan.

// RPT p-value written in terms of the projected residuals e = V_0'Z and
// eps = V_0'Y, with V_k = P_k V_0 and Vt_k spanning span(V_0) ∩ span(V_k):
//   T(Vt'V_0 e, Vt'V_0 eps) over k for the minimum, and
//   T(Vt_k'V_0 e, Vt_k'V_k eps) per k.
// Vt_k is obtained from the joint null space of I - V_0V_0' and I - V_kV_k'
// (first n - 2p columns). Requires a full-column-rank X.
double rpt_pvalue_via_original(const Matrix& x, const Vector& z, const Vector& y,
                               const PermutationSet& set);

// Every column c of vtilde satisfies |V_0V_0'c - c| < 1e-8 and |V_kV_k'c - c| < 1e-8.
bool check_intersection(const Matrix& v0, const Matrix& vk, const Matrix& vtilde);

struct RateEstimate {
  double rate = 0.0;
  double std_error = 0.0;
  Index reps = 0;
};

// Draws eps i.i.d. from `law`, forms (1 + #{k : g(eps) <= g(P_k eps)}) / (K + 1)
// and returns the empirical P(p <= alpha). ClosureError unless the set is a group.
RateEstimate exchangeability_rank_check(const std::function<double(const Vector&)>& g,
                                        const PermutationSet& set, NoiseLaw law, Index reps,
                                        double alpha, SeededRng& rng);

}  // namespace rpt::oracle
