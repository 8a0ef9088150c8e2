#include "fracstep/adaptive_controller.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include "fracstep/errors.hpp"
#include "fracstep/logging.hpp"

namespace fracstep {

void AdaptiveParams::validate() const {
  if (!(tol > 0.0)) {
    throw ConfigError("adaptive: TOL must be positive");
  }
  if (!(growth > 1.0)) {
    throw ConfigError("adaptive: Q must exceed 1");
  }
  if (!(tau_min > 0.0)) {
    throw ConfigError("adaptive: tau_min must be positive");
  }
  if (tau_init && !(*tau_init >= tau_min)) {
    throw ConfigError("adaptive: tau_init must be at least tau_min");
  }
  if (!(detect_step_threshold > 0.0) || !(detect_min_distance > 0.0)) {
    throw ConfigError("adaptive: detection thresholds must be positive");
  }
  if (max_forced_cells < 1 || max_restarts < 0) {
    throw ConfigError("adaptive: invalid forced-cell or restart budget");
  }
}

double RunReport::first_step_width() const {
  return cells.empty() ? 0.0 : cells.front().right - cells.front().left;
}

double RunReport::min_step_width() const {
  double w = std::numeric_limits<double>::infinity();
  for (const auto& c : cells) {
    w = std::min(w, c.right - c.left);
  }
  return cells.empty() ? 0.0 : w;
}

double RunReport::max_residual_ratio(double tol) const {
  double r = 0.0;
  for (const auto& c : cells) {
    if (!c.actions.empty() && c.actions.back() == StepAction::forced) {
      continue;
    }
    for (const auto& p : c.samples) {
      r = std::max(r, p.residual / (tol * p.barrier));
    }
  }
  return r;
}

void RunReport::append(const RunReport& other) {
  if (mesh.empty()) {
    mesh = other.mesh;
  } else if (!other.mesh.empty()) {
    mesh.insert(mesh.end(), other.mesh.begin() + 1, other.mesh.end());
  }
  cells.insert(cells.end(), other.cells.begin(), other.cells.end());
  for (const double s : other.onsets) {
    if (std::find(onsets.begin(), onsets.end(), s) == onsets.end()) {
      onsets.push_back(s);
    }
  }
  std::sort(onsets.begin(), onsets.end());
  detected_onsets.insert(detected_onsets.end(), other.detected_onsets.begin(),
                         other.detected_onsets.end());
  total_weight = std::max(total_weight, other.total_weight);
  solve_count += other.solve_count;
  forced_cells += other.forced_cells;
  clamp_events += other.clamp_events;
  restarts += other.restarts;
  wall_time += other.wall_time;
}

std::optional<double> detect_singularity(const ControllerState& state, double width, double node,
                                         const AdaptiveParams& params) {
  if (!(width < params.detect_step_threshold)) {
    return std::nullopt;
  }
  double last = 0.0;
  for (const double s : state.onsets) {
    if (s <= node) {
      last = std::max(last, s);
    }
  }
  if (node - last > params.detect_min_distance) {
    return node;
  }
  return std::nullopt;
}

namespace {

class Engine {
 public:
  Engine(const CollocationStepper& stepper, PiecewiseSolution start, double horizon,
         BarrierSpec barrier, const AdaptiveParams& params, bool detect)
      : stepper_(stepper),
        params_(params),
        detect_(detect),
        horizon_(horizon),
        sol(std::move(start)),
        barrier(std::move(barrier)) {
    proposals_.push_back(params.tau_init.value_or(1e-2 * horizon));
  }

  // Steps to the horizon; returns a detected onset (global) instead when one fires.
  std::optional<double> advance() {
    const double origin = sol.origin();
    while (sol.end() < horizon_) {
      const double left = sol.end();
      const double cut = next_cut(left);
      // Widths are tracked nominally; right nodes near large t are rounded.
      double step = std::min(proposals_.back(), cut - left);
      if (cut - left < params_.tau_min) {
        ++report.clamp_events;
      }
      int flag = 0;
      std::optional<CellAttempt> stash;
      double stash_step = 0.0;
      std::vector<ResidualTracePoint> stash_trace;
      std::vector<StepAction> actions;
      bool accepted = false;
      while (step >= params_.tau_min) {
        const double right = step >= cut - left ? cut : left + step;
        if (!(right > left)) {
          break;
        }
        CellAttempt trial = stepper_.attempt(sol, right);
        ++report.solve_count;
        std::vector<ResidualTracePoint> trace;
        const bool ok = passes(trial, left, trace);
        const double width = step;
        if (ok) {
          if (right >= cut) {
            actions.push_back(StepAction::accept_cut);
            accept(trial, std::move(trace), std::move(actions), width);
            accepted = true;
            break;
          }
          if (flag == 2) {
            actions.push_back(StepAction::accept_after_shrink);
            accept(trial, std::move(trace), std::move(actions), width);
            accepted = true;
            break;
          }
          stash = std::move(trial);
          stash_step = width;
          stash_trace = std::move(trace);
          actions.push_back(StepAction::grow);
          step = std::min(params_.growth * width, cut - left);
          flag = 1;
        } else {
          if (flag == 1) {
            actions.push_back(StepAction::accept_restored);
            accept(*stash, std::move(stash_trace), std::move(actions), stash_step);
            accepted = true;
            break;
          }
          actions.push_back(StepAction::shrink);
          step = width / params_.growth;
          flag = 2;
          if (detect_) {
            const ControllerState state{report.cells.size(), flag, cut, barrier.onsets};
            if (auto onset = detect_singularity(state, step, origin + left, params_)) {
              return onset;
            }
          }
        }
      }
      if (accepted) {
        forced_streak_ = 0;
        continue;
      }
      force(cut, std::move(actions));
    }
    return std::nullopt;
  }

  void truncate(std::size_t cells) {
    sol.truncate(cells);
    report.cells.resize(std::min(cells, report.cells.size()));
    proposals_.resize(cells + 1);
    forced_streak_ = 0;
  }

  const CollocationStepper& stepper_;
  const AdaptiveParams& params_;
  bool detect_;
  double horizon_;
  PiecewiseSolution sol;
  BarrierSpec barrier;
  RunReport report;

 private:
  double next_cut(double left) const {
    double cut = horizon_;
    for (const double s : barrier.onsets) {
      const double local = s - sol.origin();
      if (local > left && local < cut) {
        cut = local;
      }
    }
    return cut;
  }

  // B decreases between onsets, so testing each sample against B at the end
  // of its collocation sub-interval bounds the residual on the whole
  // sub-interval at the sampled level, not just at the sample itself.
  bool passes(const CellAttempt& trial, double left, std::vector<ResidualTracePoint>& trace) const {
    const auto& positions = stepper_.sample_positions();
    const auto& bounds = stepper_.sample_bounds();
    bool ok = true;
    for (std::size_t i = 0; i < positions.size(); ++i) {
      const TimePoint tp{sol.origin(), left, positions[i] * trial.width};
      const TimePoint end{sol.origin(), left, bounds[i] * trial.width};
      const double b = generalized_barrier(barrier, end);
      trace.push_back({tp.value(), trial.residuals[i], generalized_barrier(barrier, tp), b});
      if (!(trial.residuals[i] < params_.tol * b)) {
        ok = false;
      }
    }
    return ok;
  }

  void accept(const CellAttempt& trial, std::vector<ResidualTracePoint> trace,
              std::vector<StepAction> actions, double proposal) {
    const double left = sol.end();
    sol.append_cell(trial.right, trial.values);
    report.cells.push_back(
        {sol.origin() + left, sol.origin() + trial.right, std::move(actions), std::move(trace)});
    proposals_.push_back(proposal);
  }

  void force(double cut, std::vector<StepAction> actions) {
    if (++forced_streak_ > params_.max_forced_cells) {
      throw LockingError("adaptive: repeated tau_min fallback near t = " +
                         std::to_string(sol.origin() + sol.end()));
    }
    for (int i = 0; i < 2 && sol.end() < cut; ++i) {
      const double left = sol.end();
      const double right = std::min(left + params_.tau_min, cut);
      const CellAttempt trial = stepper_.attempt(sol, right);
      ++report.solve_count;
      ++report.forced_cells;
      std::vector<ResidualTracePoint> trace;
      passes(trial, left, trace);
      std::vector<StepAction> cell_actions = i == 0 ? std::move(actions) : std::vector<StepAction>{};
      cell_actions.push_back(StepAction::forced);
      accept(trial, std::move(trace), std::move(cell_actions), params_.tau_min);
    }
  }

  std::vector<double> proposals_;
  int forced_streak_ = 0;
};

AdaptiveRun drive(const CollocationStepper& stepper, PiecewiseSolution start, double horizon,
                  const BarrierSpec& bspec, const AdaptiveParams& params, bool detect) {
  params.validate();
  bspec.validate();
  if (!(horizon > 0.0)) {
    throw DomainError("adaptive: horizon must be positive");
  }
  if (std::fabs(bspec.alpha - stepper.problem().alpha) > 1e-15) {
    throw ConfigError("adaptive: barrier and problem use different alpha");
  }
  const auto t0 = std::chrono::steady_clock::now();
  Engine engine(stepper, std::move(start), horizon, bspec, params, detect);
  while (auto onset = engine.advance()) {
    if (++engine.report.restarts > static_cast<std::size_t>(params.max_restarts)) {
      throw LockingError("adaptive: restart budget exceeded");
    }
    double prior = 0.0;
    for (const double s : engine.barrier.onsets) {
      if (s < *onset) {
        prior = std::max(prior, s);
      }
    }
    engine.barrier.insert(*onset, 1.0);
    engine.report.detected_onsets.push_back(*onset);
    const auto& nodes = engine.sol.nodes();
    const double local = prior - engine.sol.origin();
    std::size_t keep = 0;
    for (std::size_t i = 0; i < nodes.size() && nodes[i] <= local; ++i) {
      keep = i;
    }
    engine.truncate(keep);
  }
  AdaptiveRun run{std::move(engine.sol), std::move(engine.report)};
  run.report.mesh.clear();
  for (const double t : run.solution.nodes()) {
    run.report.mesh.push_back(run.solution.origin() + t);
  }
  run.report.onsets = engine.barrier.onsets;
  run.report.total_weight = engine.barrier.total_weight();
  run.report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (run.report.forced_cells > 0) {
    warn("adaptive: " + std::to_string(run.report.forced_cells) +
         " cells were forced at tau_min; the error guarantee does not cover them");
  }
  return run;
}

}  // namespace

AdaptiveRun run_adaptive(const CollocationStepper& stepper, const BarrierSpec& bspec,
                         const AdaptiveParams& params) {
  return drive(stepper, stepper.initial_solution(), stepper.problem().horizon, bspec, params,
               params.detect);
}

AdaptiveRun run_with_detection(const CollocationStepper& stepper, const BarrierSpec& bspec,
                               const AdaptiveParams& params) {
  return drive(stepper, stepper.initial_solution(), stepper.problem().horizon, bspec, params,
               true);
}

AdaptiveRun run_segment(const CollocationStepper& stepper, PiecewiseSolution start,
                        double horizon, const BarrierSpec& bspec, const AdaptiveParams& params) {
  return drive(stepper, std::move(start), horizon, bspec, params, params.detect);
}

}  // namespace fracstep
