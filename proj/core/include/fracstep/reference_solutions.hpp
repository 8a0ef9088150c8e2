#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "fracstep/adaptive_controller.hpp"
#include "fracstep/problem.hpp"

namespace fracstep {

/// Evaluator u(x, t).
struct ExactSolution {
  std::function<double(double x, double t)> eval;

  [[nodiscard]] double operator()(double x, double t) const { return eval(x, t); }
};

/// Solution of y^(alpha) + y = 1, y(0) = 0: tau^alpha E_{alpha,alpha+1}(-tau^alpha).
[[nodiscard]] double relaxation_step_response(double alpha, double tau);

/// sin(x) times the sum of step responses, each evaluated in its own local time.
[[nodiscard]] double exact_ex1(double alpha, double x, double t);

[[nodiscard]] double exact_neg_lambda(double t);

/// Numerical reference for ex2: a shifting solve at tolerance params.tol / 100.
[[nodiscard]] ExactSolution reference_for_ex2(double alpha, double gamma,
                                              const AdaptiveParams& params,
                                              int spatial_cells = 30);

/// Known exact solution of a benchmark problem, if any.
[[nodiscard]] std::optional<ExactSolution> exact_solution(ProblemId id, double alpha);

/// n uniform times on [0, horizon], both ends included.
[[nodiscard]] std::vector<double> time_samples(double horizon, std::size_t n = 200);

/// max |u_h - u| over the given times and the operator's spatial sample points.
[[nodiscard]] double max_error(const AssembledOperator& op,
                               const std::function<Eigen::VectorXd(double)>& numerical,
                               const ExactSolution& exact, const std::vector<double>& times);

}  // namespace fracstep
