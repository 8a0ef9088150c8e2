#include "fracstep/special_functions.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fracstep/errors.hpp"

namespace fracstep {
namespace {

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

constexpr double kSqrtTwoPi = 2.5066282746310005024;

double lanczos_sum(double xm1) {
  double a = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i) {
    a += kLanczos[i] / (xm1 + static_cast<double>(i));
  }
  return a;
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(std::string(what) + ": argument must be finite and positive, got " +
                      std::to_string(x));
  }
}

bool is_integer(double x) { return std::floor(x) == x; }

// Neumaier compensated accumulator in extended precision.
struct CompensatedSum {
  long double sum = 0.0L;
  long double carry = 0.0L;

  void add(long double v) {
    const long double t = sum + v;
    if (std::fabs(sum) >= std::fabs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  [[nodiscard]] long double value() const { return sum + carry; }
};

struct Estimate {
  double value = 0.0;
  bool ok = false;
};

constexpr double kTargetRelError = 2e-13;

Estimate ml_series(double alpha, double beta, double z) {
  const double log_abs_z = std::log(std::fabs(z));
  CompensatedSum sum;
  // Each term carries a relative error of about (4 + |log term|) eps from exp().
  long double err_sum = 0.0L;
  double prev_log = -std::numeric_limits<double>::infinity();
  constexpr int kMaxTerms = 200000;
  for (int n = 0; n < kMaxTerms; ++n) {
    const double arg = alpha * n + beta;
    const double log_mag = n * log_abs_z - log_gamma(arg);
    if (log_mag > 700.0) {
      if (z > 0.0) {
        throw RangeError("mittag_leffler: value overflows double precision");
      }
      return {};
    }
    const double mag = std::exp(log_mag);
    const double term = (z < 0.0 && (n % 2 == 1)) ? -mag : mag;
    sum.add(term);
    err_sum += mag * (4.0 + std::fabs(log_mag));
    const long double current = sum.value();
    const bool decreasing = log_mag < prev_log;
    prev_log = log_mag;
    if (n > 0 && decreasing &&
        (mag == 0.0 || mag <= 1e-18L * std::fabs(current))) {
      if (current == 0.0L) {
        return {};
      }
      const double err = static_cast<double>(err_sum / std::fabs(current)) *
                         std::numeric_limits<double>::epsilon();
      return {static_cast<double>(current), err <= kTargetRelError};
    }
  }
  return {};
}

Estimate ml_asymptotic(double alpha, double beta, double z) {
  // Terms -z^-k / Gamma(beta - alpha k). Near poles of Gamma the terms are
  // deceptively small, so truncation is judged on the envelope
  // |1/Gamma(x)| <= Gamma(1 - x) / pi, valid for x < 0.
  const long double inv_z = 1.0L / static_cast<long double>(z);
  const double log_abs_z = std::log(std::fabs(z));
  long double power = 1.0L;
  long double sum = 0.0L;
  long double best_sum = 0.0L;
  double best_log_env = std::numeric_limits<double>::infinity();
  constexpr int kMaxTerms = 600;
  for (int k = 1; k < kMaxTerms; ++k) {
    power *= inv_z;
    const double x = beta - alpha * k;
    const double log_env = -k * log_abs_z + (x > 0.0 ? -log_gamma(x)
                                                     : log_gamma(1.0 - x) - std::log(std::numbers::pi));
    if (log_env > best_log_env + std::log(1e3)) {
      break;
    }
    if (log_env < best_log_env) {
      best_log_env = log_env;
      best_sum = sum;  // truncation before term k, error below its envelope
    }
    const double rg = reciprocal_gamma(x);
    if (!std::isfinite(rg)) {
      break;
    }
    sum += -power * rg;
  }
  if (best_sum == 0.0L) {
    return {};
  }
  const double err = std::exp(best_log_env);
  return {static_cast<double>(best_sum), err <= 1e-14 * std::fabs(static_cast<double>(best_sum))};
}

double checked(double value, double error, const char* route) {
  if (!std::isfinite(value) || !(error <= 1e-11 * std::fabs(value) + 1e-300)) {
    throw AccuracyError(std::string("mittag_leffler: ") + route +
                        " quadrature did not reach the accuracy target");
  }
  return value;
}

// E_{alpha,beta}(-x) for 0 < alpha < 1, 0 < beta <= 1, x > 0:
//   (1/pi) int_0^inf e^{-r} r^{alpha-beta}
//     [r^alpha sin(pi beta) - x sin(pi(alpha-beta))]
//     / (r^{2 alpha} + 2 x r^alpha cos(pi alpha) + x^2) dr
double ml_negative_integral_reduced(double alpha, double beta, double x) {
  const double s_beta = sin_pi(beta);
  const double s_ab = sin_pi(alpha - beta);
  const double c_a = std::cos(std::numbers::pi * alpha);
  auto integrand = [=](double r) {
    if (r <= 0.0) {
      return 0.0;
    }
    const double ra = std::pow(r, alpha);
    const double num = ra * s_beta - x * s_ab;
    const double den = ra * ra + 2.0 * x * ra * c_a + x * x;
    return std::exp(-r) * std::pow(r, alpha - beta) * num / den;
  };
  double split = 1.0;
  if (c_a < 0.0) {
    split = std::max(split, std::pow(-x * c_a, 1.0 / alpha));
  }
  boost::math::quadrature::tanh_sinh<double> finite;
  boost::math::quadrature::exp_sinh<double> tail;
  double err_a = 0.0;
  double err_b = 0.0;
  const double a = finite.integrate(integrand, 0.0, split, 1e-14, &err_a);
  const double b = tail.integrate(integrand, split, std::numeric_limits<double>::infinity(),
                                  1e-14, &err_b);
  const double value = (a + b) / std::numbers::pi;
  return checked(value, (err_a + err_b) / std::numbers::pi,
                 "negative-axis");
}

double ml_negative_integral(double alpha, double beta, double z) {
  if (beta > 1.0) {
    // E_{a,b}(z) = (E_{a,b-a}(z) - 1/Gamma(b-a)) / z
    return (ml_negative_integral(alpha, beta - alpha, z) - reciprocal_gamma(beta - alpha)) / z;
  }
  return ml_negative_integral_reduced(alpha, beta, -z);
}

// alpha == 1: E_{1,beta}(z) = 1/Gamma(beta-1) int_0^1 e^{z s} (1-s)^{beta-2} ds for beta > 1.
double ml_alpha_one_integral(double beta, double z) {
  if (beta <= 1.0) {
    return reciprocal_gamma(beta) + z * ml_alpha_one_integral(beta + 1.0, z);
  }
  // tanh_sinh passes the distance to the nearer endpoint, so 1 - s stays exact near s = 1.
  auto integrand = [=](double s, double sc) {
    const double one_minus = sc > 0.0 ? sc : 1.0 - s;
    return std::exp(z * s) * std::pow(one_minus, beta - 2.0);
  };
  boost::math::quadrature::tanh_sinh<double> quad;
  double err = 0.0;
  const double v = quad.integrate(integrand, 0.0, 1.0, 1e-14, &err);
  const double scale = reciprocal_gamma(beta - 1.0);
  return checked(v * scale, err * std::fabs(scale), "unit-interval");
}

}  // namespace

double sin_pi(double x) {
  double r = x - 2.0 * std::round(0.5 * x);  // r in [-1, 1]
  if (r > 0.5) {
    r = 1.0 - r;
  } else if (r < -0.5) {
    r = -1.0 - r;
  }
  return std::sin(std::numbers::pi * r);
}

double gamma(double x) {
  require_positive(x, "gamma");
  if (is_integer(x) && x <= 23.0) {
    double f = 1.0;
    for (int k = 2; k < static_cast<int>(x); ++k) {
      f *= k;
    }
    return f;
  }
  if (x < 0.5) {
    return gamma(x + 1.0) / x;
  }
  if (x > 171.6) {
    throw RangeError("gamma: overflow for x = " + std::to_string(x));
  }
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  // Split the power so t^(x-1/2) does not overflow before e^-t is applied.
  const double half_power = std::pow(t, 0.5 * (xm1 + 0.5));
  return kSqrtTwoPi * half_power * (half_power * std::exp(-t)) * lanczos_sum(xm1);
}

double log_gamma(double x) {
  require_positive(x, "log_gamma");
  if (x < 0.5) {
    return log_gamma(x + 1.0) - std::log(x);
  }
  if (x < 20.0) {
    return std::log(gamma(x));
  }
  const double xm1 = x - 1.0;
  const double t = xm1 + kLanczosG + 0.5;
  return (xm1 + 0.5) * std::log(t) - t + std::log(kSqrtTwoPi * lanczos_sum(xm1));
}

double reciprocal_gamma(double x) {
  if (std::isnan(x)) {
    throw DomainError("reciprocal_gamma: NaN argument");
  }
  if (x > 0.0) {
    return x < 171.0 ? 1.0 / gamma(x) : std::exp(-log_gamma(x));
  }
  if (is_integer(x)) {
    return 0.0;
  }
  // 1/Gamma(x) = sin(pi x) Gamma(1-x) / pi
  const double s = sin_pi(x);
  const double one_minus = 1.0 - x;
  if (one_minus < 171.0) {
    return s * gamma(one_minus) / std::numbers::pi;
  }
  return s * std::exp(log_gamma(one_minus)) / std::numbers::pi;
}

double mittag_leffler(MLParams p, double z) {
  const double alpha = p.alpha;
  const double beta = p.beta;
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw DomainError("mittag_leffler: alpha must lie in (0, 1]");
  }
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw DomainError("mittag_leffler: beta must be positive");
  }
  if (!std::isfinite(z)) {
    throw DomainError("mittag_leffler: z must be finite");
  }
  if (z == 0.0) {
    return reciprocal_gamma(beta);
  }
  if (alpha == 1.0 && beta == 1.0) {
    return std::exp(z);
  }
  const Estimate series = ml_series(alpha, beta, z);
  if (series.ok) {
    return series.value;
  }
  if (z > 0.0) {
    throw AccuracyError("mittag_leffler: series did not converge for positive argument");
  }
  const Estimate asym = ml_asymptotic(alpha, beta, z);
  if (asym.ok) {
    if (alpha < 1.0) {
      return asym.value;
    }
    // For alpha = 1 the expansion omits e^z z^(1-beta); accept only when that is negligible.
    const double omitted = std::exp(z) * std::pow(-z, 1.0 - beta);
    if (omitted <= 1e-14 * std::fabs(asym.value)) {
      return asym.value;
    }
  }
  if (alpha < 1.0) {
    return ml_negative_integral(alpha, beta, z);
  }
  return ml_alpha_one_integral(beta, z);
}

}  // namespace fracstep
