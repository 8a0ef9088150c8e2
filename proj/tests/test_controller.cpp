#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "fracstep/adaptive_controller.hpp"
#include "fracstep/errors.hpp"
#include "fracstep/problem.hpp"
#include "fracstep/reference_solutions.hpp"
#include "trace_checks.hpp"

using namespace fracstep;

namespace {

const CollocationRule kRule = CollocationRule::gauss_lobatto(4);

const CollocationStepper& ex1_stepper() {
  static const CollocationStepper st = [] {
    const ProblemSpec spec = make_problem(ProblemId::ex1, 0.4);
    return CollocationStepper(spec, assemble(spec.spatial), kRule);
  }();
  return st;
}

AdaptiveParams with_tol(double tol) {
  AdaptiveParams p;
  p.tol = tol;
  return p;
}

double ex1_error(const AdaptiveRun& run) {
  const auto ex = *exact_solution(ProblemId::ex1, 0.4);
  return max_error(ex1_stepper().op(), [&](double t) { return evaluate(run.solution, t); }, ex,
                   time_samples(1.0));
}

}  // namespace

TEST(Detect, Examples) {
  AdaptiveParams p;
  ControllerState state;
  state.onsets = {0.0};
  EXPECT_EQ(detect_singularity(state, 5e-14, 0.3333, p), 0.3333);
  EXPECT_FALSE(detect_singularity(state, 5e-14, 1e-5, p).has_value());
  EXPECT_FALSE(detect_singularity(state, 1e-6, 0.3333, p).has_value());
  state.onsets = {0.0, 0.3333};
  EXPECT_FALSE(detect_singularity(state, 5e-14, 0.3333 + 1e-5, p).has_value());
  EXPECT_EQ(detect_singularity(state, 5e-14, 0.5, p), 0.5);
}

TEST(Params, Validation) {
  AdaptiveParams p;
  p.tol = 0.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = AdaptiveParams{};
  p.growth = 1.0;
  EXPECT_THROW(p.validate(), ConfigError);
  p = AdaptiveParams{};
  p.tau_init = 1e-20;
  EXPECT_THROW(p.validate(), ConfigError);
  EXPECT_THROW((void)run_adaptive(ex1_stepper(), BarrierSpec::unit(0.5, 0.0, {0.0}), with_tol(1e-2)),
               ConfigError);
}

TEST(Controller, GeneralizedBarrierRun) {
  const ProblemSpec& spec = ex1_stepper().problem();
  const BarrierSpec b = BarrierSpec::unit(0.4, 0.0, spec.onsets());
  const AdaptiveRun run = run_adaptive(ex1_stepper(), b, with_tol(1e-2));
  const RunReport& r = run.report;
  EXPECT_TRUE(checks::mesh_monotone(r, 1.0));
  EXPECT_EQ(r.mesh.back(), 1.0);
  EXPECT_EQ(r.mesh.size(), r.step_count() + 1);
  for (double s : spec.onsets()) {
    EXPECT_TRUE(std::find(r.mesh.begin(), r.mesh.end(), s) != r.mesh.end()) << s;
  }
  EXPECT_EQ(checks::automaton_violation(r), "");
  EXPECT_EQ(r.forced_cells, 0u);
  EXPECT_LT(checks::worst_bound_ratio(r, 1e-2), 1.0);
  EXPECT_LT(r.max_residual_ratio(1e-2), 1.0);
  EXPECT_EQ(r.total_weight, 4.0);
  EXPECT_LE(ex1_error(run), 4.0 * 1e-2);
  EXPECT_GE(r.solve_count, r.step_count());
}

TEST(Controller, PlainBarrierNeedsMoreSteps) {
  const BarrierSpec gen = BarrierSpec::unit(0.4, 0.0, ex1_stepper().problem().onsets());
  const BarrierSpec plain = BarrierSpec::unit(0.4, 0.0, {0.0});
  const RunReport a = run_adaptive(ex1_stepper(), gen, with_tol(1e-2)).report;
  const RunReport b = run_adaptive(ex1_stepper(), plain, with_tol(1e-2)).report;
  EXPECT_GE(static_cast<double>(b.step_count()), 1.5 * static_cast<double>(a.step_count()));
  EXPECT_EQ(checks::automaton_violation(b), "");
  EXPECT_TRUE(checks::mesh_monotone(b, 1.0));
}

TEST(Controller, Deterministic) {
  const BarrierSpec b = BarrierSpec::unit(0.4, 0.0, ex1_stepper().problem().onsets());
  const AdaptiveRun x = run_adaptive(ex1_stepper(), b, with_tol(1e-2));
  const AdaptiveRun y = run_adaptive(ex1_stepper(), b, with_tol(1e-2));
  EXPECT_EQ(x.report.mesh, y.report.mesh);
  EXPECT_TRUE(x.solution.values() == y.solution.values());
}

TEST(Controller, DetectionRecoversOnsets) {
  AdaptiveParams p = with_tol(1e-2);
  p.detect = true;
  const AdaptiveRun run = run_adaptive(ex1_stepper(), BarrierSpec::unit(0.4, 0.0, {0.0}), p);
  const std::vector<double> want = {1.0 / 3.0, 0.5, 0.75};
  ASSERT_EQ(run.report.detected_onsets.size(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_NEAR(run.report.detected_onsets[i], want[i], 1e-3);
  }
  const std::size_t apriori =
      run_adaptive(ex1_stepper(), BarrierSpec::unit(0.4, 0.0, ex1_stepper().problem().onsets()),
                   with_tol(1e-2))
          .report.step_count();
  EXPECT_LE(std::abs(static_cast<double>(run.report.step_count()) - static_cast<double>(apriori)),
            0.1 * static_cast<double>(apriori));
  EXPECT_EQ(checks::automaton_violation(run.report), "");
  EXPECT_EQ(run.report.restarts, 3u);
}

TEST(Controller, NegativeLambdaDetection) {
  const ProblemSpec spec = make_problem(ProblemId::neg_lambda_scalar, 0.4);
  const CollocationStepper st(spec, assemble(spec.spatial), kRule);
  AdaptiveParams p = with_tol(1e-3);
  p.detect = true;
  const AdaptiveRun run =
      run_with_detection(st, BarrierSpec::unit(0.4, compute_lambda(spec.spatial), {0.0}), p);
  ASSERT_FALSE(run.report.detected_onsets.empty());
  EXPECT_NEAR(run.report.detected_onsets.front(), 0.3695, 0.02);
  const auto ex = *exact_solution(ProblemId::neg_lambda_scalar, 0.4);
  const double err =
      max_error(st.op(), [&](double t) { return evaluate(run.solution, t); }, ex, time_samples(1.0));
  EXPECT_LE(err, run.report.total_weight * 1e-3);
}

TEST(Controller, SmoothProblemHasNoDetections) {
  ProblemSpec spec = make_problem(ProblemId::ex2, 0.4, 2.0);
  spec.pieces.resize(1);
  const CollocationStepper st(spec, assemble(spec.spatial), kRule);
  AdaptiveParams p = with_tol(1e-3);
  p.detect = true;
  const AdaptiveRun run = run_adaptive(st, BarrierSpec::unit(0.4, 0.0, {0.0}), p);
  EXPECT_TRUE(run.report.detected_onsets.empty());
  EXPECT_EQ(run.report.forced_cells, 0u);
}

TEST(Controller, LockingOnUnreachableBarrier) {
  // A strongly negative lambda drives B below zero, so no cell can pass.
  const BarrierSpec b = BarrierSpec::unit(0.4, -5.0, {0.0});
  AdaptiveParams p = with_tol(1e-2);
  p.max_forced_cells = 5;
  EXPECT_THROW((void)run_adaptive(ex1_stepper(), b, p), LockingError);
}

TEST(Controller, RestartBudget) {
  AdaptiveParams p = with_tol(1e-2);
  p.detect = true;
  p.max_restarts = 1;
  EXPECT_THROW((void)run_adaptive(ex1_stepper(), BarrierSpec::unit(0.4, 0.0, {0.0}), p),
               LockingError);
}

TEST(Controller, SegmentMatchesFullRunPrefix) {
  const BarrierSpec b = BarrierSpec::unit(0.4, 0.0, ex1_stepper().problem().onsets());
  AdaptiveParams p = with_tol(1e-2);
  p.tau_init = 1e-2;
  const AdaptiveRun full = run_adaptive(ex1_stepper(), b, p);
  const AdaptiveRun part = run_segment(ex1_stepper(), ex1_stepper().initial_solution(), b.onsets[2], b, p);
  EXPECT_EQ(part.report.mesh.back(), b.onsets[2]);
  EXPECT_EQ(part.report.forced_cells, 0u);
  for (std::size_t i = 0; i < part.report.mesh.size(); ++i) {
    EXPECT_EQ(part.report.mesh[i], full.report.mesh[i]);
  }
}
