#include "fracstep/problem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fracstep/errors.hpp"
#include "fracstep/special_functions.hpp"

namespace fracstep {

void ProblemSpec::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ConfigError("problem: alpha must lie in (0, 1)");
  }
  if (!(horizon > 0.0)) {
    throw ConfigError("problem: horizon must be positive");
  }
  if (pieces.empty()) {
    throw ConfigError("problem: at least one right-hand side piece is required");
  }
  if (pieces.front().onset != 0.0) {
    throw ConfigError("problem: the first piece must start at t = 0");
  }
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    const RHSPiece& p = pieces[k];
    if (!p.temporal_profile || !p.spatial_profile) {
      throw ConfigError("problem: piece " + std::to_string(k) + " lacks a profile");
    }
    if (!(p.exponent >= 0.0)) {
      throw ConfigError("problem: piece exponents must be non-negative");
    }
    if (k > 0 && !(p.onset > pieces[k - 1].onset)) {
      throw ConfigError("problem: onsets must be strictly increasing");
    }
    if (!(p.onset < horizon)) {
      throw ConfigError("problem: every onset must lie before the horizon");
    }
  }
  if (jump_shift && !(*jump_shift >= 0.0)) {
    throw ConfigError("problem: jump_shift must be non-negative");
  }
  spatial.validate();
}

double ProblemSpec::effective_onset(std::size_t k) const {
  const double s = pieces.at(k).onset;
  if (k == 0) {
    return s;
  }
  const double shift = jump_shift ? *jump_shift
                                  : 4.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, s);
  return s - shift;
}

std::vector<double> ProblemSpec::onsets() const {
  std::vector<double> out;
  out.reserve(pieces.size());
  for (std::size_t k = 0; k < pieces.size(); ++k) {
    out.push_back(effective_onset(k));
  }
  return out;
}

void temporal_values(const ProblemSpec& spec, const TimePoint& t, std::span<double> out) {
  for (std::size_t k = 0; k < spec.pieces.size(); ++k) {
    const RHSPiece& p = spec.pieces[k];
    if (!t.reached(spec.effective_onset(k))) {
      out[k] = 0.0;
      continue;
    }
    out[k] = p.temporal_profile(std::max(0.0, t.since(p.onset)));
  }
}

double rhs_eval(const ProblemSpec& spec, double x, const TimePoint& t) {
  double sum = 0.0;
  for (std::size_t k = 0; k < spec.pieces.size(); ++k) {
    const RHSPiece& p = spec.pieces[k];
    if (t.reached(spec.effective_onset(k))) {
      sum += p.spatial_profile(x) * p.temporal_profile(std::max(0.0, t.since(p.onset)));
    }
  }
  return sum;
}

double rhs_eval(const ProblemSpec& spec, double x, double t) {
  return rhs_eval(spec, x, TimePoint::global(t));
}

ProblemId parse_problem_id(std::string_view id) {
  if (id == "ex1") {
    return ProblemId::ex1;
  }
  if (id == "ex2") {
    return ProblemId::ex2;
  }
  if (id == "neg_lambda_scalar") {
    return ProblemId::neg_lambda_scalar;
  }
  throw ConfigError("unknown problem id '" + std::string(id) + "'");
}

std::string_view to_string(ProblemId id) {
  switch (id) {
    case ProblemId::ex1:
      return "ex1";
    case ProblemId::ex2:
      return "ex2";
    case ProblemId::neg_lambda_scalar:
      return "neg_lambda_scalar";
  }
  return "unknown";
}

ProblemSpec make_problem(ProblemId id, double alpha, double gamma, int spatial_cells) {
  ProblemSpec spec;
  spec.name = std::string(to_string(id));
  spec.alpha = alpha;
  spec.horizon = 1.0;
  const ScalarFunction sine = [](double x) { return std::sin(x); };
  constexpr double kOnsets[] = {0.0, 1.0 / 3.0, 0.5, 0.75};

  switch (id) {
    case ProblemId::ex1:
      spec.spatial = SpatialOperatorSpec::laplacian(0.0, std::numbers::pi, spatial_cells);
      for (double s : kOnsets) {
        spec.pieces.push_back({s, 0.0, sine, [](double) { return 1.0; }});
      }
      break;
    case ProblemId::ex2: {
      if (!(gamma > 0.0)) {
        throw ConfigError("ex2 needs a positive smoothing exponent gamma");
      }
      spec.spatial = SpatialOperatorSpec::laplacian(0.0, std::numbers::pi, spatial_cells);
      double g = gamma;
      for (double s : kOnsets) {
        spec.pieces.push_back({s, g, sine, [g](double tau) { return std::pow(tau, g); }});
        g *= 0.5;
      }
      break;
    }
    case ProblemId::neg_lambda_scalar: {
      if (!(alpha > 0.0 && alpha <= 0.6)) {
        throw ConfigError("neg_lambda_scalar needs alpha in (0, 0.6]");
      }
      // u = t^0.6: d^a u = Gamma(1.6)/Gamma(1.6-a) t^(0.6-a), and L[u] = -u.
      const double coeff = fracstep::gamma(1.6) / fracstep::gamma(1.6 - alpha);
      spec.spatial = SpatialOperatorSpec::scalar_reaction(-1.0);
      spec.pieces.push_back({0.0, 0.6 - alpha, [](double) { return 1.0; },
                             [coeff, alpha](double tau) {
                               return coeff * std::pow(tau, 0.6 - alpha) - std::pow(tau, 0.6);
                             }});
      break;
    }
  }
  spec.validate();
  return spec;
}

}  // namespace fracstep
