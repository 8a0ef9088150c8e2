#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "fracstep/errors.hpp"
#include "fracstep/special_functions.hpp"

using fracstep::mittag_leffler;

namespace {

void expect_rel(double got, double want, double rel) {
  EXPECT_LE(std::abs(got - want), rel * std::abs(want)) << "got " << got << " want " << want;
}

}  // namespace

TEST(Gamma, Examples) {
  EXPECT_DOUBLE_EQ(fracstep::gamma(1.0), 1.0);
  expect_rel(fracstep::gamma(0.5), std::sqrt(std::numbers::pi), 1e-14);
  expect_rel(fracstep::gamma(0.6), 1.489192248812817102, 1e-13);
}

TEST(Gamma, MatchesStdOnRange) {
  for (double x = 0.051; x < 30.0; x += 0.0731) {
    expect_rel(fracstep::gamma(x), std::tgamma(x), 1e-13);
  }
}

TEST(Gamma, Recurrence) {
  for (double x = 0.0513; x < 29.0; x += 0.0917) {
    expect_rel(fracstep::gamma(x + 1.0), x * fracstep::gamma(x), 1e-12);
  }
}

TEST(Gamma, DomainErrors) {
  EXPECT_THROW((void)fracstep::gamma(0.0), fracstep::DomainError);
  EXPECT_THROW((void)fracstep::gamma(-1.5), fracstep::DomainError);
  EXPECT_THROW((void)fracstep::gamma(std::nan("")), fracstep::DomainError);
  EXPECT_THROW((void)fracstep::gamma(500.0), fracstep::RangeError);
}

TEST(Gamma, ReciprocalVanishesAtPoles) {
  EXPECT_EQ(fracstep::reciprocal_gamma(0.0), 0.0);
  EXPECT_EQ(fracstep::reciprocal_gamma(-1.0), 0.0);
  expect_rel(fracstep::reciprocal_gamma(1.4), 1.12706049798602766, 1e-13);
}

TEST(MittagLeffler, Examples) {
  expect_rel(mittag_leffler({1.0, 1.0}, 1.0), std::numbers::e, 1e-12);
  expect_rel(mittag_leffler({0.4, 1.4}, 0.0), 1.12706049798602766, 1e-13);
  expect_rel(mittag_leffler({0.5, 1.0}, -1.0), 0.42758357615580700, 1e-12);
}

TEST(MittagLeffler, HalfOrderErfcIdentity) {
  for (double z = -8.0; z <= 3.0; z += 0.25) {
    expect_rel(mittag_leffler({0.5, 1.0}, z), std::exp(z * z) * std::erfc(-z), 1e-10);
  }
}

TEST(MittagLeffler, HighPrecisionTable) {
  struct Row {
    double alpha, beta, z, value;
  };
  const Row rows[] = {
      {0.4, 1.0, -1.0, 0.44206335968522350534},  {0.4, 1.4, -0.5, 0.75300719224941921069},
      {0.8, 1.0, -2.0, 0.1897966923637056596},   {0.8, 1.8, -5.0, 0.18848092304756954925},
      {0.4, 1.0, -3.0, 0.19625892833053848583},  {0.4, 1.4, -5.0, 0.17507458577925256763},
      {0.5, 1.0, -10.0, 0.056140992743822585858}, {0.6, 1.0, -20.0, 0.022946564273258375197},
      {0.9, 1.0, -10.0, 0.012820606051102102705}, {0.9, 1.9, -30.0, 0.033209543076718004901},
      {0.4, 0.4, -2.0, 0.042600644045781755109}, {0.3, 2.5, -4.0, 0.17586484965574242902},
      {0.5, 1.0, 2.0, 108.94090438997797241},    {0.7, 1.2, 1.5, 7.2751901506864840013},
      {0.4, 1.4, -1.0, 0.55793664031477649466},  {0.4, 1.0, -50.0, 0.013341638451394954631},
      {0.4, 1.4, -50.0, 0.019733167230972100907}, {0.3, 1.0, -40.0, 0.018979521266478697093},
      {1.0, 0.4, -1.7, -0.20228786862765289211},  {1.0, 1.4, -8.0, 0.062032668357007765221},
      {1.0, 0.4, -8.0, -0.045437147661651163400}, {1.0, 2.4, -8.0, 0.13312847870362748604},
  };
  for (const Row& r : rows) {
    SCOPED_TRACE(testing::Message() << r.alpha << " " << r.beta << " " << r.z);
    expect_rel(mittag_leffler({r.alpha, r.beta}, r.z), r.value, 1e-10);
  }
}

TEST(MittagLeffler, Recurrence) {
  for (double a : {0.2, 0.4, 0.5, 0.8, 1.0}) {
    for (double b : {0.4, 1.0, 1.4, 2.0}) {
      for (double z = -50.0; z <= 3.0; z += 0.7) {
        const double lhs = mittag_leffler({a, b}, z);
        const double rhs = fracstep::reciprocal_gamma(b) + z * mittag_leffler({a, a + b}, z);
        // absolute on the decaying side, relative where E grows like exp(z^(1/a))
        EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(lhs))) << a << " " << b << " " << z;
      }
    }
  }
}

TEST(MittagLeffler, UnitOrderIsExp) {
  for (double z = -30.0; z <= 5.0; z += 0.05) {
    expect_rel(mittag_leffler({1.0, 1.0}, z), std::exp(z), 1e-10);
  }
}

TEST(MittagLeffler, MonotoneOnNegativeAxis) {
  for (double a : {0.3, 0.4, 0.7, 1.0}) {
    for (double b : {a, 1.0, a + 1.0}) {
      double prev = mittag_leffler({a, b}, -50.0);
      for (double z = -49.9; z <= 0.0; z += 0.1) {
        const double cur = mittag_leffler({a, b}, z);
        EXPECT_GE(cur, prev) << a << " " << b << " " << z;
        prev = cur;
      }
    }
  }
}

TEST(MittagLeffler, RejectsBadParameters) {
  EXPECT_THROW((void)mittag_leffler({0.0, 1.0}, 1.0), fracstep::DomainError);
  EXPECT_THROW((void)mittag_leffler({1.2, 1.0}, 1.0), fracstep::DomainError);
  EXPECT_THROW((void)mittag_leffler({0.5, 0.0}, 1.0), fracstep::DomainError);
}
