#include "rpt/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "rpt/errors.hpp"
#include "rpt/hypothesis_tests.hpp"
#include "rpt/permutation_set.hpp"

namespace rpt::cli {

namespace {

constexpr std::uint64_t kSubsampleStream = 11;
constexpr std::uint64_t kNaiveStream = 12;
constexpr std::uint64_t kRptStream = 13;
constexpr std::uint64_t kDesignStream = 14;
constexpr std::uint64_t kGenerateStream = 15;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? pos : pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return v;
}

// shortest text that round-trips
std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class Range>
std::string join(const Range& values) {
  std::string out;
  for (const auto& v : values) {
    if (!out.empty()) out += ' ';
    if constexpr (std::is_floating_point_v<std::decay_t<decltype(v)>>) {
      out += num(v);
    } else {
      out += std::to_string(v);
    }
  }
  return out.empty() ? "none" : out;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return in;
}

}  // namespace

NumericTable read_numeric_csv(std::istream& in) {
  NumericTable table;
  std::string line;
  Index line_no = 0;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split(line, ',');
    if (table.header.empty()) {
      table.header = std::move(cells);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(table.header.size()) + " fields, found " +
                       std::to_string(cells.size()));
    }
    std::vector<double> row;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (cells[j].empty()) {
        throw ParseError("line " + std::to_string(line_no) + ": missing value in column '" +
                         table.header[j] + "'");
      }
      const auto v = to_double(cells[j]);
      if (!v || !std::isfinite(*v)) {
        throw ParseError("line " + std::to_string(line_no) + ": '" + cells[j] +
                         "' in column '" + table.header[j] + "' is not a finite number");
      }
      row.push_back(*v);
    }
    rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw ParseError("line 1: empty input, expected a header row");
  table.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(table.header.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      table.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return table;
}

Dataset read_dataset_csv(std::istream& in) {
  NumericTable t = read_numeric_csv(in);
  const auto& h = t.header;
  if (h.size() < 2 || h[0] != "Y" || h[1] != "Z") {
    throw ParseError("line 1: header must start with Y,Z followed by X1..Xp");
  }
  for (std::size_t j = 2; j < h.size(); ++j) {
    if (h[j] != "X" + std::to_string(j - 1)) {
      throw ParseError("line 1: column " + std::to_string(j + 1) + " must be named X" +
                       std::to_string(j - 1) + ", found '" + h[j] + "'");
    }
  }
  if (t.values.rows() == 0) throw ParseError("line 2: no data rows");
  Dataset d;
  d.y = t.values.col(0);
  d.z = t.values.col(1);
  d.x = t.values.rightCols(t.values.cols() - 2);
  return d;
}

void write_dataset_csv(std::ostream& os, const Dataset& d) {
  os << "Y,Z";
  for (Index j = 0; j < d.x.cols(); ++j) os << ",X" << (j + 1);
  os << '\n';
  for (Index i = 0; i < d.x.rows(); ++i) {
    os << num(d.y[i]) << ',' << num(d.z[i]);
    for (Index j = 0; j < d.x.cols(); ++j) os << ',' << num(d.x(i, j));
    os << '\n';
  }
}

SimFile parse_sim_config(std::istream& in) {
  SimFile file;
  SimConfig& sim = file.sim;
  ModelConfig& model = sim.model;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("'" + trim(line) + "': expected key=value");
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));

    auto bad = [&](const char* expect) {
      return ConfigError(key + ": '" + value + "' is not " + expect);
    };
    auto as_real = [&] {
      const auto v = to_double(value);
      if (!v) throw bad("a number");
      return *v;
    };
    auto as_count = [&] {
      Index v = 0;
      const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
      if (ec != std::errc() || ptr != value.data() + value.size() || value.empty() || v < 0) {
        throw bad("a nonnegative integer");
      }
      return v;
    };
    auto as_bool = [&] {
      if (value == "true" || value == "1" || value == "yes") return true;
      if (value == "false" || value == "0" || value == "no") return false;
      throw bad("a boolean");
    };
    auto as_reals = [&] {
      std::vector<double> out;
      for (const auto& item : split(value, ',')) {
        const auto v = to_double(item);
        if (!v) throw bad("a comma-separated list of numbers");
        out.push_back(*v);
      }
      return out;
    };
    auto as_law = [&] {
      try {
        return parse_noise_law(value);
      } catch (const ConfigError&) {
        throw bad("one of gaussian, t1, t2");
      }
    };

    if (key == "n") model.n = as_count();
    else if (key == "p") model.p = as_count();
    else if (key == "b") model.b = as_real();
    else if (key == "x_law") model.x_law = as_law();
    else if (key == "noise_law") model.noise_law = as_law();
    else if (key == "z_noise_law") model.z_noise_law = as_law();
    else if (key == "toeplitz") model.toeplitz = as_bool();
    else if (key == "reps") sim.reps = as_count();
    else if (key == "alphas") sim.alphas = as_reals();
    else if (key == "K") sim.k_count = as_count();
    else if (key == "T") sim.max_loops = as_count();
    else if (key == "naive_K") sim.naive_k_count = as_count();
    else if (key == "seed") sim.seed = static_cast<std::uint64_t>(as_count());
    else if (key == "threads") sim.threads = static_cast<unsigned>(as_count());
    else if (key == "fixed_design") sim.fixed_design = as_bool();
    else if (key == "b_grid") file.b_grid = as_reals();
    else if (key == "bins") file.bins = as_count();
    else if (key == "tests") {
      sim.tests.clear();
      for (const auto& item : split(value, ',')) {
        try {
          sim.tests.push_back(parse_test_kind(item));
        } catch (const ConfigError&) {
          throw bad("a list drawn from anova, naive, rpt, rpt_em");
        }
      }
    } else {
      throw ConfigError(key + ": unknown key");
    }
  }
  sim.validate();
  return file;
}

namespace {

struct TestOptions {
  std::string data;
  std::string method = "rpt";
  Index k_count = 99;
  Index max_loops = 1;
  std::uint64_t seed = 1;
};

void report_anova(std::ostream& out, const Dataset& d) {
  if (d.x.cols() >= d.x.rows() - 1) {
    throw RegimeError("ANOVA needs p < n - 1 (n = " + std::to_string(d.x.rows()) +
                      ", p = " + std::to_string(d.x.cols()) + ")");
  }
  const AnovaResult r = anova_test(d.x, d.z, d.y);
  out << "method: anova\n"
      << "n: " << d.x.rows() << "\n"
      << "p: " << d.x.cols() << "\n"
      << "f_stat: " << num(r.f_stat) << "\n"
      << "df1: " << r.df1 << "\n"
      << "df2: " << r.df2 << "\n"
      << "p_value: " << num(r.p_value) << "\n";
}

void report_naive(std::ostream& out, const Dataset& d, const TestOptions& opt) {
  if (d.x.cols() >= d.x.rows()) {
    throw RegimeError("naive RPT needs p < n (n = " + std::to_string(d.x.rows()) +
                      ", p = " + std::to_string(d.x.cols()) + ")");
  }
  SeededRng rng = SeededRng(opt.seed).derive(kNaiveStream);
  const double p_value = naive_rpt(d.x, d.z, d.y, opt.k_count, rng);
  out << "method: naive\n"
      << "n: " << d.x.rows() << "\n"
      << "p: " << d.x.cols() << "\n"
      << "K: " << opt.k_count << "\n"
      << "p_value: " << num(p_value) << "\n";
}

void report_rpt(std::ostream& out, const Dataset& d, const TestOptions& opt) {
  const Index n = d.x.rows();
  const Index p = d.x.cols();
  if (opt.k_count < 1) throw ConfigError("K: must be at least 1");
  SeededRng sub_rng = SeededRng(opt.seed).derive(kSubsampleStream);
  const std::vector<Index> dropped = rows_to_drop(n, opt.k_count, sub_rng);
  const Index n_used = n - static_cast<Index>(dropped.size());
  if (2 * p >= n_used) {
    throw RegimeError("RPT needs p < n/2 (n = " + std::to_string(n_used) + ", p = " +
                      std::to_string(p) + "); use --method naive when n/2 <= p < n");
  }
  const Dataset used = without_rows(d, dropped);
  SeededRng rng = SeededRng(opt.seed).derive(kRptStream);
  const RptResult r = residual_permutation_test(used.x, used.z, used.y, opt.k_count, opt.max_loops, rng);
  std::vector<Index> dropped_one_based(dropped);
  for (auto& i : dropped_one_based) ++i;
  const auto& diag = r.permset_diagnostics;
  out << "method: rpt\n"
      << "n: " << n << "\n"
      << "n_used: " << n_used << "\n"
      << "dropped_rows: " << join(dropped_one_based) << "\n"
      << "p: " << p << "\n"
      << "K: " << opt.k_count << "\n"
      << "T: " << opt.max_loops << "\n"
      << "p_value: " << num(r.phi) << "\n"
      << "p_value_em: " << num(r.phi_em) << "\n"
      << "a: " << join(r.a) << "\n"
      << "b: " << join(r.b) << "\n"
      << "trace_threshold: " << num(diag.threshold) << "\n"
      << "criterion_met: " << (diag.criterion_met ? "true" : "false") << "\n"
      << "attempts: " << diag.attempts << "\n"
      << "perm_traces: " << join(diag.perm_trace) << "\n"
      << "hat_traces: " << join(diag.hat_trace) << "\n"
      << "degenerate: " << (r.degenerate ? "true" : "false") << "\n";
}

void run_test(std::ostream& out, const TestOptions& opt) {
  auto in = open_input(opt.data);
  const Dataset d = read_dataset_csv(in);
  if (opt.method == "anova") {
    report_anova(out, d);
  } else if (opt.method == "naive") {
    report_naive(out, d, opt);
  } else if (opt.method == "rpt") {
    report_rpt(out, d, opt);
  } else if (opt.method == "all") {
    report_anova(out, d);
    out << "\n";
    report_naive(out, d, opt);
    out << "\n";
    report_rpt(out, d, opt);
  } else {
    throw ConfigError("method: '" + opt.method + "' is not one of anova, naive, rpt, all");
  }
}

struct PermsOptions {
  Index n = 0;
  Index k_count = 1;
  Index max_loops = 1;
  std::uint64_t seed = 1;
  std::string design;
  bool random_design = false;
  Index p = 0;
  bool identity_pi = false;
  std::string dump;
};

void run_perms(std::ostream& out, const PermsOptions& opt) {
  Matrix x;
  if (!opt.design.empty()) {
    auto in = open_input(opt.design);
    x = read_numeric_csv(in).values;
    if (opt.n != 0 && opt.n != x.rows()) {
      throw DimensionError("--n " + std::to_string(opt.n) + " does not match the " +
                           std::to_string(x.rows()) + " design rows");
    }
  } else if (opt.random_design) {
    if (opt.n < 1) throw ConfigError("n: required with --random-design");
    SeededRng rng = SeededRng(opt.seed).derive(kDesignStream);
    x = sample_noise_matrix(NoiseLaw::gaussian, opt.n, opt.p, rng);
  } else {
    if (opt.n < 1) throw ConfigError("n: required when no design is given");
    x = Matrix::Zero(opt.n, 0);
  }
  const Index n = x.rows();

  PermutationSet set = [&] {
    if (!opt.identity_pi) {
      SeededRng rng = SeededRng(opt.seed).derive(kRptStream);
      return construct_permutation_set(x, opt.k_count, opt.max_loops, rng);
    }
    PermutationSet base = block_cyclic_set(n, opt.k_count, Permutation::identity(n));
    TraceDiagnostics diag = base.diagnostics();
    const OrthonormalBasis range = column_space_basis(x);
    diag.threshold = std::sqrt(2.0) * static_cast<double>(opt.k_count) *
                     std::sqrt(static_cast<double>(x.cols()));
    diag.criterion_met = true;
    for (const auto& perm : base.perms()) {
      diag.hat_trace.push_back(hat_trace(range, perm));
      if (std::abs(diag.hat_trace.back()) > diag.threshold) diag.criterion_met = false;
    }
    return PermutationSet(n, base.perms(), std::move(diag));
  }();

  const auto& diag = set.diagnostics();
  out << "n: " << n << "\n"
      << "p: " << x.cols() << "\n"
      << "K: " << set.size() << "\n"
      << "threshold: " << num(diag.threshold) << "\n"
      << "criterion_met: " << (diag.criterion_met ? "true" : "false") << "\n"
      << "attempts: " << diag.attempts << "\n"
      << "closure: " << (verify_group_closure(set) ? "true" : "false") << "\n"
      << "perm_traces: " << join(diag.perm_trace) << "\n"
      << "hat_traces: " << join(diag.hat_trace) << "\n"
      << "permutations:\n";
  write_permutation_set(out, set);
  if (!opt.dump.empty()) {
    std::ofstream f(opt.dump);
    if (!f) throw ConfigError("cannot write '" + opt.dump + "'");
    write_permutation_set(f, set);
  }
}

template <class Fn>
void with_output(std::ostream& out, const std::string& path, Fn&& fn) {
  if (path.empty()) {
    fn(out);
    return;
  }
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write '" + path + "'");
  fn(f);
}

SimFile load_sim(const std::string& path) {
  auto in = open_input(path);
  return parse_sim_config(in);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Residual permutation tests for a single regression coefficient"};
  app.require_subcommand(1);

  TestOptions test_opt;
  auto* test_cmd = app.add_subcommand("test", "Run ANOVA / naive RPT / RPT on a CSV dataset");
  test_cmd->add_option("--data", test_opt.data, "CSV with columns Y,Z,X1..Xp")->required();
  test_cmd->add_option("--method", test_opt.method, "anova | naive | rpt | all")
      ->capture_default_str();
  test_cmd->add_option("--K", test_opt.k_count, "Number of permutations")->capture_default_str();
  test_cmd->add_option("--T", test_opt.max_loops, "Permutation-set construction attempts")
      ->capture_default_str();
  test_cmd->add_option("--seed", test_opt.seed)->capture_default_str();

  std::string config_path;
  std::string out_path;
  auto add_sim = [&](const char* name, const char* help) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("--config", config_path, "key=value experiment file")->required();
    cmd->add_option("--out", out_path, "CSV output path (default stdout)");
    return cmd;
  };
  auto* size_cmd = add_sim("simulate-size", "Rejection rates under the null");
  auto* power_cmd = add_sim("simulate-power", "Rejection rates over b_grid");
  auto* hist_cmd = add_sim("simulate-hist", "Null p-value histogram");
  auto* gen_cmd = add_sim("generate", "Write one synthetic dataset as CSV");

  PermsOptions perms_opt;
  auto* perms_cmd = app.add_subcommand("perms", "Build a permutation set and print diagnostics");
  perms_cmd->add_option("--n", perms_opt.n, "Sample size");
  perms_cmd->add_option("--K", perms_opt.k_count)->capture_default_str();
  perms_cmd->add_option("--T", perms_opt.max_loops)->capture_default_str();
  perms_cmd->add_option("--seed", perms_opt.seed)->capture_default_str();
  perms_cmd->add_option("--design", perms_opt.design, "Numeric CSV of X (header row)");
  perms_cmd->add_flag("--random-design", perms_opt.random_design, "Gaussian n x p design");
  perms_cmd->add_option("--p", perms_opt.p, "Columns of the random design");
  perms_cmd->add_flag("--identity-pi", perms_opt.identity_pi,
                      "Skip the shuffle and use the identity ordering");
  perms_cmd->add_option("--dump", perms_opt.dump, "Also write the permutation lines here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (test_cmd->parsed()) {
      run_test(out, test_opt);
    } else if (size_cmd->parsed()) {
      const SimFile f = load_sim(config_path);
      with_output(out, out_path, [&](std::ostream& os) { write_csv(os, size_experiment(f.sim)); });
    } else if (power_cmd->parsed()) {
      const SimFile f = load_sim(config_path);
      with_output(out, out_path,
                  [&](std::ostream& os) { write_csv(os, power_curve(f.sim, f.b_grid)); });
    } else if (hist_cmd->parsed()) {
      const SimFile f = load_sim(config_path);
      with_output(out, out_path,
                  [&](std::ostream& os) { write_csv(os, pvalue_histogram(f.sim, f.bins)); });
    } else if (gen_cmd->parsed()) {
      const SimFile f = load_sim(config_path);
      SeededRng rng = SeededRng(f.sim.seed).derive(kGenerateStream);
      const Dataset d = generate_dataset(f.sim.model, rng);
      with_output(out, out_path, [&](std::ostream& os) { write_dataset_csv(os, d); });
    } else if (perms_cmd->parsed()) {
      run_perms(out, perms_opt);
    }
  } catch (const Error& e) {
    err << "error[" << e.code() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error[Internal]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace rpt::cli
