#pragma once

#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "rpt/datagen.hpp"

namespace rpt {

enum class TestKind { anova, naive, rpt, rpt_em };

std::string_view to_string(TestKind kind);
TestKind parse_test_kind(std::string_view name);  // ConfigError on unknown names

struct SimConfig {
  ModelConfig model;
  std::vector<TestKind> tests{TestKind::anova};
  Index reps = 1000;
  std::vector<double> alphas{0.01, 0.005};
  Index k_count = 99;         // RPT
  Index max_loops = 1;        // RPT
  Index naive_k_count = 999;  // naive RPT
  std::uint64_t seed = 1;
  unsigned threads = 1;
  bool fixed_design = false;

  void validate() const;  // ConfigError naming the bad field
};

// p-values indexed [test][replicate], tests in cfg.tests order. Replicate r
// draws from SeededRng(seed).derive(r), so the result does not depend on the
// thread count. Errors raised inside a replicate are rethrown on the caller.
struct PValueTable {
  std::vector<TestKind> tests;
  std::vector<std::vector<double>> p_values;
  const std::vector<double>& of(TestKind kind) const;
};

PValueTable simulate_pvalues(const SimConfig& cfg);

struct RateRow {
  TestKind test = TestKind::anova;
  double alpha = 0.0;
  double b = 0.0;
  Index reps = 0;
  double rate = 0.0;
  double std_error = 0.0;  // sqrt(r (1 - r) / reps)
};

struct RateReport {
  ModelConfig model;
  std::vector<RateRow> rows;
  const RateRow& find(TestKind test, double alpha, double b = 0.0) const;
};
using SizeReport = RateReport;
using PowerReport = RateReport;

struct HistRow {
  TestKind test = TestKind::anova;
  Index reps = 0;
  std::vector<Index> counts;  // bins over [0, 1]; p = 1 lands in the last bin
};

struct HistReport {
  ModelConfig model;
  std::vector<HistRow> rows;
};

double rejection_rate(const std::vector<double>& p_values, double alpha);
double binomial_std_error(double rate, Index reps);

SizeReport size_experiment(const SimConfig& cfg);                       // ConfigError if b != 0
PowerReport power_curve(const SimConfig& cfg, const std::vector<double>& b_grid);
HistReport pvalue_histogram(const SimConfig& cfg, Index bins);          // ConfigError if b != 0

// test,n,p,x_law,noise_law,alpha,b,reps,rate,stderr
void write_csv(std::ostream& os, const RateReport& report);
// test,n,p,x_law,noise_law,bin_lo,bin_hi,count,reps
void write_csv(std::ostream& os, const HistReport& report);

}  // namespace rpt
