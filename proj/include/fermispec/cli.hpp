#pragma once

#include <string>
#include <vector>

namespace fermispec {

/// Parsed command line, filled in by run() before dispatch.
struct RunConfig {
  std::string subcommand;
  int n_sites = 0;
  std::vector<int> n_list;
  double field = 1.0;
  double h_min = 0.0;
  double h_max = 2.0;
  int steps = 0;
  int cut = 0;  // 0 means "use n_sites / 2"
  int top_k = 10;
  int chi_prime = 4;
  int chi_overlap = 4;
  int chi_entropy = 3;
  std::string output;  // empty means "<subcommand>.csv"
  bool emit_plot = false;
};

/// Front end: parses args (program name excluded), runs the subcommand,
/// writes CSV/plot files, prints fit summaries. Returns the process exit
/// code: 0 success, 2 validation error, 1 numerical failure.
int run(std::vector<std::string> args);

}  // namespace fermispec
