#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fracstep/spatial_fem.hpp"
#include "fracstep/time_point.hpp"

namespace fracstep {

/// One term H(t - onset) * spatial(x) * temporal(t - onset) of the right-hand side.
struct RHSPiece {
  double onset = 0.0;
  double exponent = 0.0;  // expected behaviour (t - onset)^exponent, diagnostics only
  ScalarFunction spatial_profile;
  ScalarFunction temporal_profile;  // of local time, defined for tau >= 0
};

/// (d_t^alpha + L) u = f on (0, horizon] x Omega with u(., 0) = initial.
struct ProblemSpec {
  std::string name;
  double alpha = 0.5;
  double horizon = 1.0;
  std::vector<RHSPiece> pieces;
  ScalarFunction initial;  // empty means zero initial data
  SpatialOperatorSpec spatial;
  /// Absolute left shift of the interior onsets. When unset each onset s_k,
  /// k >= 1, moves left by 4 eps max(1, s_k).
  std::optional<double> jump_shift;

  void validate() const;
  /// Onset k after the left shift; s_0 = 0 never moves.
  [[nodiscard]] double effective_onset(std::size_t k) const;
  [[nodiscard]] std::vector<double> onsets() const;
};

/// f(x, t), taking the post-jump value at an onset.
[[nodiscard]] double rhs_eval(const ProblemSpec& spec, double x, double t);
[[nodiscard]] double rhs_eval(const ProblemSpec& spec, double x, const TimePoint& t);

/// Temporal factor of every piece at t (zero for pieces not yet switched on).
void temporal_values(const ProblemSpec& spec, const TimePoint& t, std::span<double> out);

enum class ProblemId { ex1, ex2, neg_lambda_scalar };

[[nodiscard]] ProblemId parse_problem_id(std::string_view id);
[[nodiscard]] std::string_view to_string(ProblemId id);

/// The benchmark problems:
///  ex1  (d^a - d_xx) u = (H(t) + H(t-1/3) + H(t-1/2) + H(t-3/4)) sin x on (0, pi) x (0, 1]
///  ex2  as ex1 with the pieces smoothed to H(t-s_k) (t-s_k)^(gamma/2^k)
///  neg_lambda_scalar  (d^a - 1) u = f on (0, 1] with exact solution t^0.6
[[nodiscard]] ProblemSpec make_problem(ProblemId id, double alpha, double gamma = 0.0,
                                       int spatial_cells = 30);

}  // namespace fracstep
