#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "rpt/cli.hpp"
#include "rpt/errors.hpp"

using namespace rpt;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "rpt");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "rpt_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_file(const std::string& name, const std::string& body) {
  const fs::path p = scratch(name);
  std::ofstream(p) << body;
  return p;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string field(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + ": ", 0) == 0) return line.substr(key.size() + 2);
  }
  return "<missing>";
}

fs::path dataset_file(const std::string& name, Index n, Index p, std::uint64_t seed, bool zero_z) {
  Dataset d;
  d.x = testing::gaussian_matrix(n, p, seed);
  d.z = zero_z ? Vector::Zero(n) : Vector(testing::gaussian_vector(n, seed + 1));
  d.y = testing::gaussian_vector(n, seed + 2);
  std::ostringstream os;
  cli::write_dataset_csv(os, d);
  return write_file(name, os.str());
}

}  // namespace

TEST_CASE("test subcommand") {
  SUBCASE("Z = 0 with K = 2 on six rows") {
    const fs::path f = write_file("zero.csv",
                                  "Y,Z,X1\n0.3,0,1\n-1.2,0,2\n0.8,0,3\n2.1,0,4\n-0.4,0,5\n1.7,0,6\n");
    const Outcome o = invoke({"test", "--data", f.string(), "--K", "2"});
    REQUIRE(o.code == 0);
    CHECK(field(o.out, "p_value") == "1");
    CHECK(field(o.out, "p_value_em") == "1");
    CHECK(field(o.out, "degenerate") == "true");
    CHECK(field(o.out, "dropped_rows") == "none");
    CHECK(field(o.out, "perm_traces") == "0 0");
  }
  SUBCASE("byte-identical output for a fixed seed") {
    const fs::path f = dataset_file("det.csv", 40, 4, 7, false);
    const Outcome a = invoke({"test", "--data", f.string(), "--method", "all", "--K", "9", "--seed", "3"});
    const Outcome b = invoke({"test", "--data", f.string(), "--method", "all", "--K", "9", "--seed", "3"});
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("method: anova") != std::string::npos);
    CHECK(a.out.find("method: naive") != std::string::npos);
  }
  SUBCASE("rows dropped to reach a multiple of K + 1") {
    const fs::path f = dataset_file("odd.csv", 13, 2, 21, false);
    const Outcome o = invoke({"test", "--data", f.string(), "--K", "3"});
    REQUIRE(o.code == 0);
    CHECK(field(o.out, "n") == "13");
    CHECK(field(o.out, "n_used") == "12");
    const std::string dropped = field(o.out, "dropped_rows");
    CHECK(dropped.find(' ') == std::string::npos);
    const int row = std::stoi(dropped);
    CHECK(row >= 1);
    CHECK(row <= 13);
  }
  SUBCASE("rpt regime error") {
    const fs::path f = dataset_file("wide.csv", 12, 6, 3, false);
    const Outcome o = invoke({"test", "--data", f.string(), "--K", "3"});
    CHECK(o.code == 1);
    CHECK(o.err.rfind("error[RegimeError]", 0) == 0);
  }
  SUBCASE("parse error carries the line number") {
    const fs::path f = write_file("bad.csv", "Y,Z,X1\n1,2,3\n4,five,6\n");
    const Outcome o = invoke({"test", "--data", f.string()});
    CHECK(o.code == 1);
    CHECK(o.err.find("ParseError") != std::string::npos);
    CHECK(o.err.find("line 3") != std::string::npos);
  }
}

TEST_CASE("config files") {
  SUBCASE("minimal size run") {
    const fs::path cfg = write_file("min.conf",
                                    "# tiny\nn = 24\np = 3\nreps = 10\nalphas = 0.05\n"
                                    "tests = anova, rpt\nK = 3\n");
    const fs::path out = scratch("min.csv");
    const Outcome o = invoke({"simulate-size", "--config", cfg.string(), "--out", out.string()});
    REQUIRE(o.code == 0);
    const std::string csv = read_file(out);
    CHECK(csv.rfind("test,n,p,x_law,noise_law,alpha,b,reps,rate,stderr\n", 0) == 0);
    CHECK(csv.find("\nanova,24,3,gaussian,gaussian,0.05,0,10,") != std::string::npos);
    CHECK(csv.find("\nrpt,24,3,gaussian,gaussian,0.05,0,10,") != std::string::npos);
  }
  SUBCASE("errors name the key") {
    const auto check_bad = [](const std::string& body, const std::string& key) {
      std::istringstream in(body);
      try {
        cli::parse_sim_config(in);
        FAIL("expected ConfigError for " << key);
      } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).rfind(key + ":", 0) == 0);
      }
    };
    check_bad("reps = -4\n", "reps");
    check_bad("noise_law = t7\n", "noise_law");
    check_bad("colour = red\n", "colour");
    check_bad("n = 24\np = 12\ntests = rpt\nK = 3\n", "tests");
  }
  SUBCASE("generate round trip") {
    const fs::path cfg = write_file("gen.conf", "n = 10\np = 2\nseed = 4\n");
    const fs::path out = scratch("gen.csv");
    REQUIRE(invoke({"generate", "--config", cfg.string(), "--out", out.string()}).code == 0);
    std::ifstream in(out);
    const Dataset d = cli::read_dataset_csv(in);
    CHECK(d.x.rows() == 10);
    CHECK(d.x.cols() == 2);
  }
  SUBCASE("shipped recipes parse") {
    for (const char* name : {"anova_size_desk.conf", "rpt_power_desk.conf"}) {
      std::ifstream in(fs::path(RPT_RECIPE_DIR) / name);
      REQUIRE(in);
      CHECK_NOTHROW(cli::parse_sim_config(in));
    }
  }
}

TEST_CASE("perms subcommand") {
  const fs::path dump = scratch("perms.txt");
  const Outcome o = invoke({"perms", "--n", "6", "--K", "2", "--identity-pi", "--dump", dump.string()});
  REQUIRE(o.code == 0);
  CHECK(field(o.out, "closure") == "true");
  CHECK(read_file(dump) == "3 1 2 6 4 5\n2 3 1 5 6 4\n");

  const Outcome r = invoke({"perms", "--n", "40", "--K", "3", "--T", "5", "--random-design", "--p", "4"});
  REQUIRE(r.code == 0);
  CHECK(field(r.out, "closure") == "true");
  CHECK(field(r.out, "perm_traces") == "0 0 0");

  const Outcome bad = invoke({"perms", "--n", "7", "--K", "2"});
  CHECK(bad.code == 1);
  CHECK(bad.err.rfind("error[DivisibilityError]", 0) == 0);
}

TEST_CASE("executable") {
  const std::string cmd = std::string(RPT_CLI_PATH) + " --help > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
}
