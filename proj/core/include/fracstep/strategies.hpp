#pragma once

#include <vector>

#include <Eigen/Dense>

#include "fracstep/adaptive_controller.hpp"
#include "fracstep/barrier.hpp"
#include "fracstep/collocation.hpp"
#include "fracstep/piecewise_solution.hpp"
#include "fracstep/problem.hpp"
#include "fracstep/spatial_fem.hpp"

namespace fracstep {

/// Sum of per-piece solutions, component k living on [offsets[k], horizon].
struct MergedSolution {
  std::vector<double> offsets;
  std::vector<PiecewiseSolution> components;
  double horizon = 0.0;

  /// Dof coefficients at global time t.
  [[nodiscard]] Eigen::VectorXd evaluate(double t) const;
};

struct SplitRun {
  MergedSolution solution;
  RunReport report;  // all components, times shifted to global
  std::vector<RunReport> components;
};

/// One adaptive run per right-hand side piece, each with a single barrier
/// term at its own start weighted by the piece's barrier weight.
[[nodiscard]] SplitRun solve_by_splitting(const ProblemSpec& spec, const CollocationRule& rule,
                                          const AssembledOperator& op, const BarrierSpec& bspec,
                                          const AdaptiveParams& params, int residual_samples = 0);

/// One adaptive run per interval between onsets, in local time, carrying the
/// earlier solution as Caputo history.
[[nodiscard]] AdaptiveRun solve_by_shifting(const ProblemSpec& spec, const CollocationRule& rule,
                                            const AssembledOperator& op, const BarrierSpec& bspec,
                                            const AdaptiveParams& params,
                                            int residual_samples = 0);

}  // namespace fracstep
