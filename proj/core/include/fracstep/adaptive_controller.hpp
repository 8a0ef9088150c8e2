#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "fracstep/barrier.hpp"
#include "fracstep/piecewise_solution.hpp"
#include "fracstep/stepper.hpp"

namespace fracstep {

struct AdaptiveParams {
  double tol = 1e-4;
  double growth = 1.2;              // Q
  std::optional<double> tau_init;   // default 1e-2 * horizon
  double tau_min = 1e-14;
  bool detect = false;
  double detect_step_threshold = 1e-13;
  double detect_min_distance = 1e-4;
  int max_forced_cells = 100;       // consecutive tau_min fallbacks before locking
  int max_restarts = 32;

  void validate() const;
};

enum class StepAction {
  grow,                 // passed, cell enlarged and retried
  shrink,               // failed, cell reduced and retried
  accept_cut,           // passed with the right node at T_cmp
  accept_after_shrink,  // passed after at least one shrink
  accept_restored,      // failed after growth, stashed cell accepted
  forced,               // tau_min fallback
};

struct ResidualTracePoint {
  double t = 0.0;         // global time
  double residual = 0.0;  // sup norm of the residual
  double barrier = 0.0;   // B(t)
  double bound = 0.0;     // B at the end of the sample's collocation sub-interval
};

struct CellRecord {
  double left = 0.0;  // global
  double right = 0.0;
  std::vector<StepAction> actions;
  std::vector<ResidualTracePoint> samples;
};

struct RunReport {
  std::vector<double> mesh;  // global nodes
  std::vector<CellRecord> cells;
  std::vector<double> onsets;
  std::vector<double> detected_onsets;
  double total_weight = 0.0;
  std::size_t solve_count = 0;
  std::size_t forced_cells = 0;
  std::size_t clamp_events = 0;
  std::size_t restarts = 0;
  double wall_time = 0.0;

  [[nodiscard]] std::size_t step_count() const noexcept { return cells.size(); }
  [[nodiscard]] double first_step_width() const;
  [[nodiscard]] double min_step_width() const;
  /// max of residual / (tol * B(t)) over the samples of every non-forced cell.
  [[nodiscard]] double max_residual_ratio(double tol) const;
  /// Appends the cells and counters of a later segment.
  void append(const RunReport& other);
};

struct ControllerState {
  std::size_t cell = 0;
  int flag = 0;
  double t_cmp = 0.0;
  std::vector<double> onsets;  // current S, global
};

struct AdaptiveRun {
  PiecewiseSolution solution;
  RunReport report;
};

/// Returns `node` as a new onset when the trial width fell below the
/// detection threshold far enough from the last known onset.
[[nodiscard]] std::optional<double> detect_singularity(const ControllerState& state, double width,
                                                       double node,
                                                       const AdaptiveParams& params);

/// Adaptive stepping over [0, horizon]; restarts on detections when params.detect is set.
[[nodiscard]] AdaptiveRun run_adaptive(const CollocationStepper& stepper, const BarrierSpec& bspec,
                                       const AdaptiveParams& params);

/// run_adaptive with detection switched on.
[[nodiscard]] AdaptiveRun run_with_detection(const CollocationStepper& stepper,
                                             const BarrierSpec& bspec,
                                             const AdaptiveParams& params);

/// Continues `start` (possibly carrying a history) up to local time `horizon`.
/// Barrier onsets are global; those inside the segment become cut points.
[[nodiscard]] AdaptiveRun run_segment(const CollocationStepper& stepper, PiecewiseSolution start,
                                      double horizon, const BarrierSpec& bspec,
                                      const AdaptiveParams& params);

}  // namespace fracstep
