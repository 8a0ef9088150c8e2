#include "fracstep/collocation.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "fracstep/errors.hpp"

namespace fracstep {

CollocationRule CollocationRule::gauss_lobatto(int m, bool last_node_shift) {
  if (m < 1) {
    throw ConfigError("collocation order must be at least 1");
  }
  CollocationRule rule;
  rule.m = m;
  rule.last_node_shift = last_node_shift;
  // Newton iteration on (1 - x^2) P_m'(x) from Chebyshev-Gauss-Lobatto guesses.
  std::vector<double> x(static_cast<std::size_t>(m) + 1);
  for (int j = 0; j <= m; ++j) {
    x[j] = -std::cos(std::numbers::pi * j / m);
  }
  for (int iter = 0; iter < 100; ++iter) {
    double change = 0.0;
    for (int j = 1; j < m; ++j) {
      double p_prev = 1.0;
      double p = x[j];
      for (int k = 2; k <= m; ++k) {
        const double next = ((2.0 * k - 1.0) * x[j] * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = next;
      }
      const double step = (x[j] * p - p_prev) / ((m + 1) * p);
      x[j] -= step;
      change = std::max(change, std::fabs(step));
    }
    if (change < 1e-16) {
      break;
    }
  }
  rule.nodes.resize(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) {
    rule.nodes[j] = 0.5 * (x[j] + 1.0);
  }
  rule.nodes.front() = 0.0;
  rule.nodes.back() = 1.0;
  if (m % 2 == 0) {
    rule.nodes[static_cast<std::size_t>(m / 2)] = 0.5;
  }
  return rule;
}

double CollocationRule::rhs_position(int i) const {
  const double c = nodes.at(static_cast<std::size_t>(i));
  if (i == m && last_node_shift) {
    return (1.0 - std::numeric_limits<double>::epsilon()) * c;
  }
  return c;
}

void CollocationRule::validate() const {
  if (m < 1 || nodes.size() != static_cast<std::size_t>(m) + 1) {
    throw ConfigError("collocation rule: needs m + 1 nodes");
  }
  if (nodes.front() != 0.0 || nodes.back() != 1.0) {
    throw ConfigError("collocation rule: nodes must start at 0 and end at 1");
  }
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (!(nodes[i] > nodes[i - 1])) {
      throw ConfigError("collocation rule: nodes must be strictly increasing");
    }
  }
}

QuadratureRule gauss_legendre_unit(int n) {
  if (n < 1) {
    throw DomainError("gauss_legendre_unit: n must be positive");
  }
  QuadratureRule rule;
  rule.points.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) {
        p0 = 1.0;
        p1 = x;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double step = p1 / dp;
      x -= step;
      if (std::fabs(step) < 1e-16) {
        break;
      }
    }
    rule.points[i] = 0.5 * (1.0 - x);
    rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

void lagrange_values(std::span<const double> nodes, double s, std::span<double> out) {
  const std::size_t n = nodes.size();
  for (std::size_t j = 0; j < n; ++j) {
    double v = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
      if (k != j) {
        v *= (s - nodes[k]) / (nodes[j] - nodes[k]);
      }
    }
    out[j] = v;
  }
}

Eigen::MatrixXd lagrange_monomials(std::span<const double> nodes) {
  const auto n = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd coeffs = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Eigen::VectorXd poly = Eigen::VectorXd::Zero(n);
    poly(0) = 1.0;
    Eigen::Index degree = 0;
    double denom = 1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (k == j) {
        continue;
      }
      // poly *= (s - c_k)
      for (Eigen::Index p = degree + 1; p > 0; --p) {
        poly(p) = poly(p - 1) - nodes[k] * poly(p);
      }
      poly(0) *= -nodes[k];
      ++degree;
      denom *= nodes[j] - nodes[k];
    }
    coeffs.row(j) = poly.transpose() / denom;
  }
  return coeffs;
}

}  // namespace fracstep
