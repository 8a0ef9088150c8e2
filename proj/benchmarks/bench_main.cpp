#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "fracstep/adaptive_controller.hpp"
#include "fracstep/caputo.hpp"
#include "fracstep/problem.hpp"
#include "fracstep/special_functions.hpp"
#include "fracstep/stepper.hpp"

using namespace fracstep;

namespace {

const CollocationRule kRule = CollocationRule::gauss_lobatto(4);

// ex1 solution on a graded mesh of n cells.
struct Fixture {
  explicit Fixture(int cells, int spatial = 30)
      : spec(make_problem(ProblemId::ex1, 0.4, 0.0, spatial)),
        stepper(spec, assemble(spec.spatial), kRule),
        sol(stepper.initial_solution()) {
    for (int i = 1; i <= cells; ++i) {
      const double right = 0.9 * std::pow(static_cast<double>(i) / cells, 2.5);
      sol.append_cell(right, stepper.solve_cell(sol, right));
    }
  }
  ProblemSpec spec;
  CollocationStepper stepper;
  PiecewiseSolution sol;
};

void BM_CaputoHistory(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  const std::vector<double> offsets = {1e-3, 2e-3, 5e-3, 9e-3};
  Eigen::MatrixXd out(f.sol.ndof(), static_cast<Eigen::Index>(offsets.size()));
  for (auto _ : state) {
    out.setZero();
    accumulate_history(f.stepper.caputo(), f.sol, f.sol.num_cells(), f.sol.end(), offsets, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CaputoHistory)->RangeMultiplier(4)->Range(16, 1024)->Complexity(benchmark::oN);

void BM_SolveCell(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  const double right = f.sol.end() + 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.stepper.solve_cell(f.sol, right).data());
  }
}
BENCHMARK(BM_SolveCell)->Arg(16)->Arg(256);

void BM_Attempt(benchmark::State& state) {
  const Fixture f(static_cast<int>(state.range(0)));
  const double right = f.sol.end() + 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(f.stepper.attempt(f.sol, right).residuals.data());
  }
}
BENCHMARK(BM_Attempt)->Arg(16)->Arg(256);

void BM_AdaptiveEx1(benchmark::State& state) {
  const ProblemSpec spec = make_problem(ProblemId::ex1, 0.4);
  const CollocationStepper st(spec, assemble(spec.spatial), kRule);
  const BarrierSpec b = BarrierSpec::unit(0.4, 0.0, spec.onsets());
  AdaptiveParams p;
  p.tol = 1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_adaptive(st, b, p).report.step_count());
  }
}
BENCHMARK(BM_AdaptiveEx1)->Unit(benchmark::kMillisecond);

void BM_MittagLeffler(benchmark::State& state) {
  const double z = -static_cast<double>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mittag_leffler({0.4, 1.4}, z));
  }
}
BENCHMARK(BM_MittagLeffler)->Arg(1)->Arg(5)->Arg(50);

void BM_Gamma(benchmark::State& state) {
  double x = 0.6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(fracstep::gamma(x));
    x = x < 20.0 ? x + 0.37 : 0.6;
  }
}
BENCHMARK(BM_Gamma);

}  // namespace

BENCHMARK_MAIN();
