#pragma once

#include <optional>
#include <vector>

#include "fracstep/time_point.hpp"

namespace fracstep {

/// B(t) = sum_k w_k R(t - s_k) with R(t) = lambda + t^-alpha / Gamma(1 - alpha) for t > 0.
struct BarrierSpec {
  double alpha = 0.5;
  double lambda = 0.0;
  std::vector<double> onsets{0.0};
  std::vector<double> weights{1.0};

  [[nodiscard]] double total_weight() const;
  void validate() const;
  /// Inserts an onset keeping the list sorted.
  void insert(double onset, double weight = 1.0);

  /// Unit weights at the given onsets.
  [[nodiscard]] static BarrierSpec unit(double alpha, double lambda, std::vector<double> onsets);
};

[[nodiscard]] double base_barrier(double alpha, double lambda, double t);

[[nodiscard]] double generalized_barrier(const BarrierSpec& spec, double t);
[[nodiscard]] double generalized_barrier(const BarrierSpec& spec, const TimePoint& t);

/// Sum of the weights of the onsets at or before t.
[[nodiscard]] double error_bound(const BarrierSpec& spec, double t);

/// Positive root of R for lambda < 0.
[[nodiscard]] std::optional<double> barrier_root(double alpha, double lambda);

/// Appends onsets until the barrier stays at least rho |lambda| on (0, horizon].
[[nodiscard]] BarrierSpec extend_for_negative_lambda(const BarrierSpec& spec, double horizon,
                                                     double rho = 0.05,
                                                     double new_weight = 1.0);

}  // namespace fracstep
