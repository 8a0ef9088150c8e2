#pragma once

#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fracstep/caputo.hpp"
#include "fracstep/collocation.hpp"
#include "fracstep/piecewise_solution.hpp"
#include "fracstep/problem.hpp"
#include "fracstep/spatial_fem.hpp"

namespace fracstep {

/// A solved trial cell together with its sampled residual norms.
struct CellAttempt {
  double right = 0.0;
  double width = 0.0;
  Eigen::MatrixXd values;        // ndof x m, nodes 1..m
  std::vector<double> residuals; // sup norm at each sample position
};

/// Collocation in time for M u' ^alpha + A u = F on a fixed spatial operator.
///
/// With a symmetric operator the cell system decouples in the eigenbasis of
/// A v = mu M v into ndof systems of size m; otherwise the full m * ndof
/// system is factorised.
class CollocationStepper {
 public:
  enum class Solver { automatic, modal, dense };

  CollocationStepper(ProblemSpec problem, AssembledOperator op, CollocationRule rule,
                     int residual_samples = 0, Solver solver = Solver::automatic);

  [[nodiscard]] const ProblemSpec& problem() const noexcept { return problem_; }
  [[nodiscard]] const AssembledOperator& op() const noexcept { return op_; }
  [[nodiscard]] const CollocationRule& rule() const noexcept { return rule_; }
  [[nodiscard]] const CaputoOperator& caputo() const noexcept { return caputo_; }
  [[nodiscard]] bool modal() const noexcept { return modal_; }
  /// Reference positions of the residual samples, ascending.
  [[nodiscard]] const std::vector<double>& sample_positions() const noexcept { return samples_; }
  /// For each sample, the right end c_i of the collocation sub-interval holding it.
  [[nodiscard]] const std::vector<double>& sample_bounds() const noexcept { return bounds_; }

  /// Empty solution holding the projected initial data.
  [[nodiscard]] PiecewiseSolution initial_solution() const;
  /// Empty solution continuing a flat history from its final node.
  [[nodiscard]] PiecewiseSolution continuation(
      std::shared_ptr<const PiecewiseSolution> history) const;

  /// Values at nodes 1..m of the cell [prev.end(), right].
  [[nodiscard]] Eigen::MatrixXd solve_cell(const PiecewiseSolution& prev, double right) const;

  /// solve_cell plus the residual norms at the sample positions.
  [[nodiscard]] CellAttempt attempt(const PiecewiseSolution& prev, double right) const;

  /// Residual (as dof coefficients) of cell k at reference positions s.
  [[nodiscard]] Eigen::MatrixXd residual(const PiecewiseSolution& sol, std::size_t k,
                                         std::span<const double> positions) const;

  /// (local time, sup norm) at the default sample positions of cell k.
  [[nodiscard]] std::vector<std::pair<double, double>> residual_samples(
      const PiecewiseSolution& sol, std::size_t k) const;

  /// Right-hand side M^-1 F at a time point, as dof coefficients.
  [[nodiscard]] Eigen::VectorXd forcing(const TimePoint& t) const;

 private:
  [[nodiscard]] Eigen::MatrixXd solve_system(const Eigen::MatrixXd& rhs, double width) const;
  [[nodiscard]] Eigen::MatrixXd residual_block(const Eigen::MatrixXd& history,
                                               const PiecewiseSolution& sol,
                                               const Eigen::Ref<const Eigen::MatrixXd>& cell,
                                               double left, double width,
                                               std::span<const double> positions) const;

  ProblemSpec problem_;
  AssembledOperator op_;
  CollocationRule rule_;
  CaputoOperator caputo_;
  bool modal_ = false;
  Eigen::MatrixXd reaction_;   // M^-1 A
  Eigen::MatrixXd profiles_;   // ndof x pieces, M^-1 load of each spatial profile
  Eigen::VectorXd initial_;
  Eigen::MatrixXd modes_;      // V with V^T M V = I
  Eigen::MatrixXd modes_inv_;  // V^T M
  Eigen::VectorXd eigenvalues_;
  std::vector<double> samples_;
  std::vector<double> bounds_;
};

}  // namespace fracstep
