#include "fracstep/reference_solutions.hpp"

#include <cmath>

#include "fracstep/barrier.hpp"
#include "fracstep/collocation.hpp"
#include "fracstep/errors.hpp"
#include "fracstep/special_functions.hpp"
#include "fracstep/spatial_fem.hpp"
#include "fracstep/strategies.hpp"

namespace fracstep {

double relaxation_step_response(double alpha, double tau) {
  if (!(tau > 0.0)) {
    return 0.0;
  }
  const double z = std::pow(tau, alpha);
  return z * mittag_leffler({alpha, alpha + 1.0}, -z);
}

double exact_ex1(double alpha, double x, double t) {
  static constexpr double onsets[] = {0.0, 1.0 / 3.0, 0.5, 0.75};
  double sum = 0.0;
  for (const double s : onsets) {
    if (t > s) {
      sum += relaxation_step_response(alpha, t - s);
    }
  }
  return std::sin(x) * sum;
}

double exact_neg_lambda(double t) {
  return t > 0.0 ? std::pow(t, 0.6) : 0.0;
}

ExactSolution reference_for_ex2(double alpha, double gamma, const AdaptiveParams& params,
                                int spatial_cells) {
  const ProblemSpec spec = make_problem(ProblemId::ex2, alpha, gamma, spatial_cells);
  auto op = std::make_shared<const AssembledOperator>(assemble(spec.spatial));
  const BarrierSpec bspec = BarrierSpec::unit(alpha, compute_lambda(spec.spatial), spec.onsets());
  AdaptiveParams p = params;
  p.tol = params.tol / 100.0;
  p.detect = false;
  try {
    auto sol = std::make_shared<const PiecewiseSolution>(
        solve_by_shifting(spec, CollocationRule::gauss_lobatto(4), *op, bspec, p).solution);
    return {[sol, op](double x, double t) {
      if (!(t > 0.0)) {
        return op->value_at(sol->values().col(0), x);
      }
      return op->value_at(evaluate(*sol, std::min(t, sol->end())), x);
    }};
  } catch (const SubproblemError& e) {
    throw AccuracyError(std::string("reference_for_ex2: ") + e.what());
  }
}

std::optional<ExactSolution> exact_solution(ProblemId id, double alpha) {
  switch (id) {
    case ProblemId::ex1:
      return ExactSolution{[alpha](double x, double t) { return exact_ex1(alpha, x, t); }};
    case ProblemId::neg_lambda_scalar:
      return ExactSolution{[](double, double t) { return exact_neg_lambda(t); }};
    case ProblemId::ex2:
      return std::nullopt;
  }
  return std::nullopt;
}

std::vector<double> time_samples(double horizon, std::size_t n) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) {
    t[i] = n > 1 ? horizon * static_cast<double>(i) / static_cast<double>(n - 1) : horizon;
  }
  return t;
}

double max_error(const AssembledOperator& op,
                 const std::function<Eigen::VectorXd(double)>& numerical,
                 const ExactSolution& exact, const std::vector<double>& times) {
  double err = 0.0;
  for (const double t : times) {
    const Eigen::VectorXd values = op.sample_table * numerical(t);
    for (std::size_t i = 0; i < op.sample_coords.size(); ++i) {
      err = std::max(err, std::fabs(values(static_cast<Eigen::Index>(i)) -
                                    exact(op.sample_coords[i], t)));
    }
  }
  return err;
}

}  // namespace fracstep
