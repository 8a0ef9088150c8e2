#pragma once

namespace fracstep {

/// Gamma function for x > 0 (Lanczos approximation, g = 7, nine terms).
/// Throws DomainError for x <= 0 and RangeError past the double range.
[[nodiscard]] double gamma(double x);

/// log Gamma(x) for x > 0.
[[nodiscard]] double log_gamma(double x);

/// 1 / Gamma(x) for every real x; zero at the non-positive integers.
[[nodiscard]] double reciprocal_gamma(double x);

/// sin(pi x) with exact zeros at the integers.
[[nodiscard]] double sin_pi(double x);

struct MLParams {
  double alpha = 1.0;  // (0, 1]
  double beta = 1.0;   // > 0
};

/// Two-parameter Mittag-Leffler function
///   E_{alpha,beta}(z) = sum_{n>=0} z^n / Gamma(alpha n + beta)
/// for real z, targeting 1e-10 relative accuracy.
///
/// Evaluation order: the Taylor series whenever its cancellation estimate is
/// acceptable; for z < 0 the algebraic asymptotic expansion
///   -sum_{k>=1} z^{-k} / Gamma(beta - alpha k)
/// truncated at its smallest term; otherwise (z < 0 only) a real integral
/// obtained by collapsing the Hankel contour onto the negative axis.
/// Throws AccuracyError when no route certifies the result and RangeError
/// when the value overflows.
[[nodiscard]] double mittag_leffler(MLParams p, double z);

}  // namespace fracstep
