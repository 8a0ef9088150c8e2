#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fracstep/problem.hpp"

namespace fracstep::cli {

enum class Strategy { barrier, split, shift };
enum class BarrierKind { generalized, plain };

struct RunConfig {
  std::string label;
  ProblemId problem = ProblemId::ex1;
  double alpha = 0.4;
  double gamma = 0.25;
  std::optional<double> jump_shift;

  int m = 4;
  bool last_node_shift = true;
  int spatial_cells = 30;
  int residual_samples = 0;  // 0: one per collocation sub-interval plus the refined start

  double tol = 1e-4;
  double growth = 1.2;
  std::optional<double> tau_init;
  double tau_min = 1e-14;
  bool detect = false;
  double detect_step_threshold = 1e-13;
  double detect_min_distance = 1e-4;
  int max_forced_cells = 100;
  int max_restarts = 32;

  BarrierKind barrier = BarrierKind::generalized;
  std::vector<double> onsets;   // overrides the a-priori set when non-empty
  std::string weights = "unit"; // unit, halving or a comma list
  double rho = 0.05;

  Strategy strategy = Strategy::barrier;
  bool ex2_reference = true;  // error of ex2 against the numerical reference
  int solution_times = 101;
  std::filesystem::path out = "fracstep_out";

  void validate() const;
};

// Flat "key = value" text, '#' starts a comment. Unknown keys, duplicates and
// malformed values raise ConfigError.
[[nodiscard]] RunConfig parse_config(std::string_view text);
[[nodiscard]] RunConfig load_config(const std::filesystem::path& path);

[[nodiscard]] Strategy parse_strategy(std::string_view name);
[[nodiscard]] std::string_view to_string(Strategy s);

}  // namespace fracstep::cli
