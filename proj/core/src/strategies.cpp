#include "fracstep/strategies.hpp"

#include <algorithm>
#include <chrono>
#include <memory>

#include "fracstep/errors.hpp"
#include "fracstep/stepper.hpp"

namespace fracstep {

Eigen::VectorXd MergedSolution::evaluate(double t) const {
  if (components.empty()) {
    throw DomainError("merged solution: no components");
  }
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(components.front().ndof());
  for (std::size_t k = 0; k < components.size(); ++k) {
    if (t >= offsets[k]) {
      const double local = std::min(t - offsets[k], components[k].end());
      sum += fracstep::evaluate(components[k], local);
    }
  }
  return sum;
}

namespace {

double weight_of(const BarrierSpec& bspec, double onset) {
  for (std::size_t i = 0; i < bspec.onsets.size(); ++i) {
    if (bspec.onsets[i] == onset) {
      return bspec.weights[i];
    }
  }
  return 1.0;
}

}  // namespace

SplitRun solve_by_splitting(const ProblemSpec& spec, const CollocationRule& rule,
                            const AssembledOperator& op, const BarrierSpec& bspec,
                            const AdaptiveParams& params, int residual_samples) {
  spec.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<double> onsets = spec.onsets();
  SplitRun out;
  out.solution.horizon = spec.horizon;
  for (std::size_t k = 0; k < spec.pieces.size(); ++k) {
    ProblemSpec sub = spec;
    sub.name = spec.name + "/" + std::to_string(k);
    sub.pieces = {spec.pieces[k]};
    sub.pieces.front().onset = 0.0;
    sub.horizon = spec.horizon - spec.pieces[k].onset;
    if (k > 0) {
      sub.initial = nullptr;
    }
    // Weight w_k on a single term is the same as tolerance w_k * TOL.
    BarrierSpec sub_barrier{bspec.alpha, bspec.lambda, {0.0}, {weight_of(bspec, onsets[k])}};
    try {
      const CollocationStepper stepper(sub, op, rule, residual_samples);
      AdaptiveParams p = params;
      p.detect = false;
      AdaptiveRun run = run_adaptive(stepper, sub_barrier, p);
      for (auto& cell : run.report.cells) {
        cell.left += spec.pieces[k].onset;
        cell.right += spec.pieces[k].onset;
        for (auto& s : cell.samples) {
          s.t += spec.pieces[k].onset;
        }
      }
      for (auto& t : run.report.mesh) {
        t += spec.pieces[k].onset;
      }
      out.solution.offsets.push_back(spec.pieces[k].onset);
      out.solution.components.push_back(std::move(run.solution));
      out.components.push_back(std::move(run.report));
    } catch (const LockingError& e) {
      throw SubproblemError(k, e.what(), true);
    } catch (const Error& e) {
      throw SubproblemError(k, e.what());
    }
  }

  RunReport& merged = out.report;
  for (const auto& r : out.components) {
    merged.cells.insert(merged.cells.end(), r.cells.begin(), r.cells.end());
    merged.mesh.insert(merged.mesh.end(), r.mesh.begin(), r.mesh.end());
    merged.solve_count += r.solve_count;
    merged.forced_cells += r.forced_cells;
    merged.clamp_events += r.clamp_events;
    merged.total_weight += r.total_weight;
  }
  std::stable_sort(merged.cells.begin(), merged.cells.end(),
                   [](const CellRecord& a, const CellRecord& b) { return a.left < b.left; });
  std::sort(merged.mesh.begin(), merged.mesh.end());
  merged.mesh.erase(std::unique(merged.mesh.begin(), merged.mesh.end()), merged.mesh.end());
  merged.onsets = out.solution.offsets;
  merged.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

AdaptiveRun solve_by_shifting(const ProblemSpec& spec, const CollocationRule& rule,
                              const AssembledOperator& op, const BarrierSpec& bspec,
                              const AdaptiveParams& params, int residual_samples) {
  const CollocationStepper stepper(spec, op, rule, residual_samples);
  std::vector<double> ends = spec.onsets();
  ends.erase(ends.begin());
  ends.push_back(spec.horizon);

  AdaptiveParams p = params;
  p.detect = false;
  std::shared_ptr<const PiecewiseSolution> history;
  RunReport report;
  for (std::size_t k = 0; k < ends.size(); ++k) {
    try {
      PiecewiseSolution start = stepper.continuation(history);
      const double local_horizon = ends[k] - start.origin();
      AdaptiveParams segment = p;
      if (!params.tau_init) {
        segment.tau_init = 1e-2 * local_horizon;
      }
      AdaptiveRun run = run_segment(stepper, std::move(start), local_horizon, bspec, segment);
      report.append(run.report);
      history = std::make_shared<const PiecewiseSolution>(flatten(run.solution));
    } catch (const LockingError& e) {
      throw SubproblemError(k, e.what(), true);
    } catch (const Error& e) {
      throw SubproblemError(k, e.what());
    }
  }
  report.total_weight = bspec.total_weight();
  report.onsets = bspec.onsets;
  return {*history, std::move(report)};
}

}  // namespace fracstep
