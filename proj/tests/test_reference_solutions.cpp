#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "caputo_oracle.hpp"
#include "fracstep/errors.hpp"
#include "fracstep/reference_solutions.hpp"
#include "fracstep/special_functions.hpp"

using namespace fracstep;

namespace {
constexpr double kMid = std::numbers::pi / 2.0;
}

TEST(Reference, Ex1Values) {
  EXPECT_EQ(exact_ex1(0.4, kMid, 0.0), 0.0);
  EXPECT_NEAR(exact_ex1(0.4, kMid, 0.25), 0.41144711860910271129, 1e-13);
  EXPECT_NEAR(relaxation_step_response(0.4, 0.25), 0.41144711860910271129, 1e-13);
  EXPECT_NEAR(exact_ex1(0.4, kMid, 0.9), 1.8651002885568251375, 1e-12);
  EXPECT_NEAR(exact_ex1(0.4, 1.0, 0.9), std::sin(1.0) * 1.8651002885568251375, 1e-12);
}

TEST(Reference, Ex1PiecesAreShifts) {
  for (double tau : {0.01, 0.1, 0.15}) {
    const double a = exact_ex1(0.4, kMid, 1.0 / 3.0 + tau) - relaxation_step_response(0.4, 1.0 / 3.0 + tau);
    EXPECT_NEAR(a, relaxation_step_response(0.4, tau), 1e-14);
  }
}

TEST(Reference, RelaxationBounds) {
  for (double alpha : {0.1, 0.4, 0.7, 0.95}) {
    for (int i = 1; i <= 400; ++i) {
      const double v = relaxation_step_response(alpha, i / 400.0);
      EXPECT_GT(v, 0.0);
      EXPECT_LT(v, 1.0);
    }
  }
}

TEST(Reference, RelaxationSolvesEquation) {
  // v' = t^(a-1) E_{a,a}(-t^a); check d^a v + v = 1 with the quadrature oracle
  const double alpha = 0.4;
  const auto dv = [alpha](double s) {
    return std::pow(s, alpha - 1.0) * mittag_leffler({alpha, alpha}, -std::pow(s, alpha));
  };
  for (double t : {0.05, 0.3, 0.8}) {
    const double d = oracle::caputo_singular_start(dv, alpha, t);
    EXPECT_NEAR(d + relaxation_step_response(alpha, t), 1.0, 1e-10) << t;
  }
}

TEST(Reference, NegLambda) {
  EXPECT_EQ(exact_neg_lambda(0.0), 0.0);
  EXPECT_EQ(exact_neg_lambda(1.0), 1.0);
  EXPECT_NEAR(exact_neg_lambda(0.5), 0.65975395538644713, 1e-15);
  EXPECT_FALSE(exact_solution(ProblemId::ex2, 0.4).has_value());
  EXPECT_TRUE(exact_solution(ProblemId::ex1, 0.4).has_value());
}

TEST(Reference, TimeSamples) {
  const auto t = time_samples(2.0, 5);
  EXPECT_EQ(t, (std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0}));
  EXPECT_EQ(time_samples(1.0).size(), 200u);
}

TEST(Reference, Ex2MatchesSeriesBeforeFirstJump) {
  AdaptiveParams p;
  p.tol = 1e-3;
  const struct {
    double gamma, t, value;
  } rows[] = {
      {2.0, 0.05, 0.0004241143540924123182},  {2.0, 0.15, 0.0054333663128659512128},
      {2.0, 0.3, 0.026684008011081244749},    {0.25, 0.05, 0.1129836533264283135},
      {0.25, 0.15, 0.20583852714708104304},   {0.25, 0.3, 0.29408993622816498705},
  };
  for (double gamma : {2.0, 0.25}) {
    const ExactSolution ref = reference_for_ex2(0.4, gamma, p);
    EXPECT_EQ(ref(kMid, 0.0), 0.0);
    for (const auto& r : rows) {
      if (r.gamma == gamma) {
        // one active piece: error at most TOL / 100 plus the spatial error
        EXPECT_NEAR(ref(kMid, r.t), r.value, 2e-5) << gamma << " " << r.t;
      }
    }
    if (gamma == 0.25) {
      EXPECT_NEAR(ref(kMid, 0.9), 1.7046151962390398659, 4.0 * 1e-5 + 1e-6);
    }
  }
}

TEST(Reference, Ex2SelfConsistent) {
  AdaptiveParams coarse;
  coarse.tol = 1e-2;
  AdaptiveParams fine;
  fine.tol = 1e-3;
  const ExactSolution a = reference_for_ex2(0.4, 0.25, coarse);
  const ExactSolution b = reference_for_ex2(0.4, 0.25, fine);
  double worst = 0.0;
  for (double t : time_samples(1.0)) {
    for (double x : {0.3, kMid, 2.5}) {
      worst = std::max(worst, std::abs(a(x, t) - b(x, t)));
    }
  }
  EXPECT_LE(worst, 2.0 * 4.0 * 1e-2 / 100.0);
}
