#include "fracstep/barrier.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fracstep/errors.hpp"
#include "fracstep/logging.hpp"
#include "fracstep/special_functions.hpp"

namespace fracstep {

double BarrierSpec::total_weight() const {
  return std::accumulate(weights.begin(), weights.end(), 0.0);
}

void BarrierSpec::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("barrier: alpha must lie in (0, 1)");
  }
  if (onsets.empty() || onsets.size() != weights.size()) {
    throw ConfigError("barrier: need one weight per onset");
  }
  if (onsets.front() != 0.0) {
    throw ConfigError("barrier: the first onset must be 0");
  }
  for (std::size_t k = 0; k < onsets.size(); ++k) {
    if (!(weights[k] > 0.0)) {
      throw ConfigError("barrier: weights must be positive");
    }
    if (k > 0 && !(onsets[k] > onsets[k - 1])) {
      throw ConfigError("barrier: onsets must be strictly increasing");
    }
  }
}

void BarrierSpec::insert(double onset, double weight) {
  const auto it = std::lower_bound(onsets.begin(), onsets.end(), onset);
  const auto pos = it - onsets.begin();
  onsets.insert(it, onset);
  weights.insert(weights.begin() + pos, weight);
}

BarrierSpec BarrierSpec::unit(double alpha, double lambda, std::vector<double> onsets) {
  BarrierSpec spec{alpha, lambda, std::move(onsets), {}};
  spec.weights.assign(spec.onsets.size(), 1.0);
  return spec;
}

double base_barrier(double alpha, double lambda, double t) {
  if (!(t > 0.0)) {
    return 0.0;
  }
  return lambda + std::pow(t, -alpha) * reciprocal_gamma(1.0 - alpha);
}

double generalized_barrier(const BarrierSpec& spec, const TimePoint& t) {
  const double rg = reciprocal_gamma(1.0 - spec.alpha);
  double sum = 0.0;
  for (std::size_t k = 0; k < spec.onsets.size(); ++k) {
    const double d = t.since(spec.onsets[k]);
    if (d > 0.0) {
      sum += spec.weights[k] * (spec.lambda + std::pow(d, -spec.alpha) * rg);
    }
  }
  return sum;
}

double generalized_barrier(const BarrierSpec& spec, double t) {
  return generalized_barrier(spec, TimePoint::global(t));
}

double error_bound(const BarrierSpec& spec, double t) {
  double sum = 0.0;
  for (std::size_t k = 0; k < spec.onsets.size(); ++k) {
    if (spec.onsets[k] <= t) {
      sum += spec.weights[k];
    }
  }
  return sum;
}

std::optional<double> barrier_root(double alpha, double lambda) {
  if (!(lambda < 0.0)) {
    return std::nullopt;
  }
  return std::pow(-lambda * gamma(1.0 - alpha), -1.0 / alpha);
}

BarrierSpec extend_for_negative_lambda(const BarrierSpec& spec, double horizon, double rho,
                                       double new_weight) {
  spec.validate();
  if (!(spec.lambda < 0.0)) {
    return spec;
  }
  if (!(rho > 0.0 && rho < 1.0)) {
    throw ConfigError("barrier: rho must lie in (0, 1)");
  }
  if (const auto root = barrier_root(spec.alpha, spec.lambda); root && horizon / *root > 64.0) {
    warn("barrier: long horizon for a negative lambda, the onset list will be large");
  }
  BarrierSpec out = spec;
  const double level = rho * std::fabs(spec.lambda);
  const auto excess = [&](double t) { return generalized_barrier(out, t) - level; };
  while (true) {
    // Every term decreases after its onset, so the partial barrier crosses
    // the level at most once on (last onset, horizon].
    const double start = out.onsets.back();
    if (excess(horizon) >= 0.0) {
      break;
    }
    double hi = horizon;
    double lo = start;
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      if (excess(mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    const double onset = 0.5 * (lo + hi);
    if (!(onset > start) || onset >= horizon) {
      break;
    }
    out.onsets.push_back(onset);
    out.weights.push_back(new_weight);
    if (out.onsets.size() > 10000) {
      throw ConfigError("barrier: negative lambda extension does not terminate");
    }
  }
  return out;
}

}  // namespace fracstep
