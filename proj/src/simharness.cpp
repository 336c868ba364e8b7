#include "rpt/simharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <optional>
#include <ostream>
#include <string>
#include <thread>

#include "rpt/errors.hpp"
#include "rpt/hypothesis_tests.hpp"

namespace rpt {

namespace {

// Streams reserved for quantities shared by all replicates in fixed-design mode.
constexpr std::uint64_t kFixedDesignStream = 0xD0000000'00000001ULL;
constexpr std::uint64_t kFixedPermStream = 0xD0000000'00000002ULL;

constexpr std::uint64_t kDataStream = 0;
constexpr std::uint64_t kNaiveStream = 1;
constexpr std::uint64_t kRptStream = 2;

bool wants(const std::vector<TestKind>& tests, TestKind kind) {
  return std::find(tests.begin(), tests.end(), kind) != tests.end();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

struct ReplicateOutcome {
  double anova = 1.0;
  double naive = 1.0;
  double rpt = 1.0;
  double rpt_em = 1.0;
};

}  // namespace

std::string_view to_string(TestKind kind) {
  switch (kind) {
    case TestKind::anova: return "anova";
    case TestKind::naive: return "naive";
    case TestKind::rpt: return "rpt";
    case TestKind::rpt_em: return "rpt_em";
  }
  return "unknown";
}

TestKind parse_test_kind(std::string_view name) {
  if (name == "anova") return TestKind::anova;
  if (name == "naive") return TestKind::naive;
  if (name == "rpt") return TestKind::rpt;
  if (name == "rpt_em") return TestKind::rpt_em;
  throw ConfigError("unknown test '" + std::string(name) +
                    "' (expected anova, naive, rpt or rpt_em)");
}

void SimConfig::validate() const {
  model.validate();
  if (reps < 1) throw ConfigError("reps: must be at least 1");
  if (tests.empty()) throw ConfigError("tests: must name at least one test");
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) throw ConfigError("alphas: must lie in (0, 1)");
  }
  const Index n = model.n;
  const Index p = model.p;
  if (wants(tests, TestKind::anova) && n <= p + 1) {
    throw ConfigError("tests: anova needs n > p + 1");
  }
  if (wants(tests, TestKind::naive) && naive_k_count < 1) {
    throw ConfigError("naive_K: must be at least 1");
  }
  if (wants(tests, TestKind::rpt) || wants(tests, TestKind::rpt_em)) {
    if (k_count < 1) throw ConfigError("K: must be at least 1");
    if (max_loops < 1) throw ConfigError("T: must be at least 1");
    const Index n_used = n - n % (k_count + 1);
    if (2 * p >= n_used) {
      throw ConfigError("tests: rpt needs p < n/2 after dropping n mod (K + 1) rows (" +
                        std::to_string(n_used) + " rows left)");
    }
  }
  if (threads < 1) throw ConfigError("threads: must be at least 1");
}

const std::vector<double>& PValueTable::of(TestKind kind) const {
  for (std::size_t i = 0; i < tests.size(); ++i) {
    if (tests[i] == kind) return p_values[i];
  }
  throw ConfigError("test '" + std::string(to_string(kind)) + "' was not simulated");
}

PValueTable simulate_pvalues(const SimConfig& cfg) {
  cfg.validate();
  const DataGenerator gen(cfg.model);
  const SeededRng master(cfg.seed);
  const bool run_anova = wants(cfg.tests, TestKind::anova);
  const bool run_naive = wants(cfg.tests, TestKind::naive);
  const bool run_rpt = wants(cfg.tests, TestKind::rpt) || wants(cfg.tests, TestKind::rpt_em);

  std::optional<Matrix> fixed_x;
  std::optional<NaiveResidualTest> fixed_naive;
  std::optional<RptPlan> fixed_plan;
  std::vector<Index> fixed_drop;
  if (cfg.fixed_design) {
    SeededRng design_rng = master.derive(kFixedDesignStream);
    fixed_x = gen.design(design_rng);
    if (run_naive) fixed_naive.emplace(*fixed_x);
    if (run_rpt) {
      SeededRng perm_rng = master.derive(kFixedPermStream);
      fixed_drop = rows_to_drop(cfg.model.n, cfg.k_count, perm_rng);
      const Vector blank = Vector::Zero(cfg.model.n);
      const Matrix x = without_rows({*fixed_x, blank, blank}, fixed_drop).x;
      fixed_plan.emplace(x, construct_permutation_set(x, cfg.k_count, cfg.max_loops, perm_rng));
    }
  }

  auto run_replicate = [&](Index r) {
    const SeededRng rep = master.derive(static_cast<std::uint64_t>(r));
    SeededRng data_rng = rep.derive(kDataStream);
    const Dataset d = fixed_x ? gen.responses(*fixed_x, data_rng) : gen.dataset(data_rng);
    ReplicateOutcome out;
    if (run_anova) out.anova = anova_test(d.x, d.z, d.y).p_value;
    if (run_naive) {
      SeededRng naive_rng = rep.derive(kNaiveStream);
      out.naive = fixed_naive ? fixed_naive->p_value(d.z, d.y, cfg.naive_k_count, naive_rng)
                              : naive_rpt(d.x, d.z, d.y, cfg.naive_k_count, naive_rng);
    }
    if (run_rpt) {
      RptResult res;
      if (fixed_plan) {
        const Dataset used = without_rows(d, fixed_drop);
        res = fixed_plan->evaluate(used.z, used.y);
      } else {
        SeededRng rpt_rng = rep.derive(kRptStream);
        const Dataset used = without_rows(d, rows_to_drop(cfg.model.n, cfg.k_count, rpt_rng));
        res = residual_permutation_test(used.x, used.z, used.y, cfg.k_count, cfg.max_loops,
                                        rpt_rng);
      }
      out.rpt = res.phi;
      out.rpt_em = res.phi_em;
    }
    return out;
  };

  std::vector<ReplicateOutcome> outcomes(static_cast<std::size_t>(cfg.reps));
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const Index r = next.fetch_add(1);
      if (r >= cfg.reps) return;
      try {
        outcomes[static_cast<std::size_t>(r)] = run_replicate(r);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(cfg.reps);
        return;
      }
    }
  };
  const unsigned n_threads =
      static_cast<unsigned>(std::min<Index>(cfg.threads, std::max<Index>(cfg.reps, 1)));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  PValueTable table;
  table.tests = cfg.tests;
  for (TestKind kind : cfg.tests) {
    std::vector<double> column;
    column.reserve(outcomes.size());
    for (const auto& o : outcomes) {
      switch (kind) {
        case TestKind::anova: column.push_back(o.anova); break;
        case TestKind::naive: column.push_back(o.naive); break;
        case TestKind::rpt: column.push_back(o.rpt); break;
        case TestKind::rpt_em: column.push_back(o.rpt_em); break;
      }
    }
    table.p_values.push_back(std::move(column));
  }
  return table;
}

double rejection_rate(const std::vector<double>& p_values, double alpha) {
  if (p_values.empty()) return 0.0;
  const auto hits =
      std::count_if(p_values.begin(), p_values.end(), [&](double p) { return p <= alpha; });
  return static_cast<double>(hits) / static_cast<double>(p_values.size());
}

double binomial_std_error(double rate, Index reps) {
  return std::sqrt(rate * (1.0 - rate) / static_cast<double>(reps));
}

const RateRow& RateReport::find(TestKind test, double alpha, double b) const {
  for (const auto& row : rows) {
    if (row.test == test && row.alpha == alpha && row.b == b) return row;
  }
  throw ConfigError("report has no row for test '" + std::string(to_string(test)) +
                    "' at alpha " + fmt(alpha) + ", b " + fmt(b));
}

namespace {

void append_rates(RateReport& report, const SimConfig& cfg, const PValueTable& table, double b) {
  for (std::size_t i = 0; i < table.tests.size(); ++i) {
    for (double alpha : cfg.alphas) {
      RateRow row;
      row.test = table.tests[i];
      row.alpha = alpha;
      row.b = b;
      row.reps = cfg.reps;
      row.rate = rejection_rate(table.p_values[i], alpha);
      row.std_error = binomial_std_error(row.rate, cfg.reps);
      report.rows.push_back(row);
    }
  }
}

}  // namespace

SizeReport size_experiment(const SimConfig& cfg) {
  if (cfg.model.b != 0.0) throw ConfigError("b: must be 0 for a size experiment");
  SizeReport report;
  report.model = cfg.model;
  append_rates(report, cfg, simulate_pvalues(cfg), 0.0);
  return report;
}

PowerReport power_curve(const SimConfig& cfg, const std::vector<double>& b_grid) {
  if (b_grid.empty()) throw ConfigError("b_grid: must not be empty");
  PowerReport report;
  report.model = cfg.model;
  for (double b : b_grid) {
    SimConfig at_b = cfg;
    at_b.model.b = b;
    append_rates(report, at_b, simulate_pvalues(at_b), b);
  }
  return report;
}

HistReport pvalue_histogram(const SimConfig& cfg, Index bins) {
  if (cfg.model.b != 0.0) throw ConfigError("b: must be 0 for a null histogram");
  if (bins < 1) throw ConfigError("bins: must be at least 1");
  const PValueTable table = simulate_pvalues(cfg);
  HistReport report;
  report.model = cfg.model;
  for (std::size_t i = 0; i < table.tests.size(); ++i) {
    HistRow row;
    row.test = table.tests[i];
    row.reps = cfg.reps;
    row.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double p : table.p_values[i]) {
      const auto bin = std::clamp<Index>(static_cast<Index>(std::floor(p * bins)), 0, bins - 1);
      ++row.counts[static_cast<std::size_t>(bin)];
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

void write_csv(std::ostream& os, const RateReport& report) {
  os << "test,n,p,x_law,noise_law,alpha,b,reps,rate,stderr\n";
  for (const auto& row : report.rows) {
    os << to_string(row.test) << ',' << report.model.n << ',' << report.model.p << ','
       << to_string(report.model.x_law) << ',' << to_string(report.model.noise_law) << ','
       << fmt(row.alpha) << ',' << fmt(row.b) << ',' << row.reps << ',' << fmt(row.rate) << ','
       << fmt(row.std_error) << '\n';
  }
}

void write_csv(std::ostream& os, const HistReport& report) {
  os << "test,n,p,x_law,noise_law,bin_lo,bin_hi,count,reps\n";
  for (const auto& row : report.rows) {
    const auto bins = static_cast<double>(row.counts.size());
    for (std::size_t i = 0; i < row.counts.size(); ++i) {
      os << to_string(row.test) << ',' << report.model.n << ',' << report.model.p << ','
         << to_string(report.model.x_law) << ',' << to_string(report.model.noise_law) << ','
         << fmt(static_cast<double>(i) / bins) << ',' << fmt(static_cast<double>(i + 1) / bins)
         << ',' << row.counts[i] << ',' << row.reps << '\n';
    }
  }
}

}  // namespace rpt
