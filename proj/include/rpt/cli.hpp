#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "rpt/datagen.hpp"
#include "rpt/simharness.hpp"

namespace rpt::cli {

// Header row plus numeric rows; ParseError carries the 1-based line number.
struct NumericTable {
  std::vector<std::string> header;
  Matrix values;
};
NumericTable read_numeric_csv(std::istream& in);

// Columns Y, Z, X1..Xp in that order.
Dataset read_dataset_csv(std::istream& in);
void write_dataset_csv(std::ostream& os, const Dataset& d);

// Flat key=value config; '#' starts a comment. Unknown keys and bad values
// raise ConfigError naming the key.
struct SimFile {
  SimConfig sim;
  std::vector<double> b_grid{0.0};
  Index bins = 20;
};
SimFile parse_sim_config(std::istream& in);

// Entry point behind the `rpt` executable. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rpt::cli
