#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace oscc::cli {

// Runs one subcommand; returns 0 on success, 2 on invalid input, 3 when a solver
// fails to converge.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// x.csv -> x_summary.csv
std::string summary_path(const std::string& per_sample_path);

unsigned thread_cap();

}  // namespace oscc::cli
