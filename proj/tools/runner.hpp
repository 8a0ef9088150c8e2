#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace fracstep::cli {

struct RunSummary {
  std::string label;
  std::size_t step_count = 0;
  std::optional<double> max_error;
  double error_bound = 0.0;  // W * TOL
  double min_step_width = 0.0;
  double wall_time = 0.0;
};

// Solves one configuration and writes mesh.csv, residual_trace.csv,
// solution.csv and report.json into config.out. Nothing is written when the
// solve fails.
RunSummary execute(const RunConfig& config);

// Runs each configuration into out/<label> and writes out/compare.csv.
std::vector<RunSummary> compare(const std::vector<RunConfig>& configs,
                                const std::filesystem::path& out);

// Command line entry: 0 ok, 1 numerical failure, 2 locking, 3 configuration error.
int run_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace fracstep::cli
