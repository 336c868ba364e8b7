#include <iostream>

#include "rpt/cli.hpp"

int main(int argc, char** argv) { return rpt::cli::run(argc, argv, std::cout, std::cerr); }
