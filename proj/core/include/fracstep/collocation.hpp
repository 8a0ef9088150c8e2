#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fracstep {

/// Continuous collocation in time: nodes 0 = c_0 < c_1 < ... < c_m = 1 on the
/// reference cell. With `last_node_shift` the right-hand side at the final
/// node is sampled at 1 - eps instead of 1, so a jump located exactly at the
/// cell end is never seen by the cell.
struct CollocationRule {
  int m = 4;
  std::vector<double> nodes;
  bool last_node_shift = true;

  /// Gauss-Lobatto points on [0, 1] (m = 4: 0, 0.1727, 0.5, 0.8273, 1).
  [[nodiscard]] static CollocationRule gauss_lobatto(int m, bool last_node_shift = true);

  /// Reference position at which the right-hand side is sampled for node i >= 1.
  [[nodiscard]] double rhs_position(int i) const;
  void validate() const;
};

struct QuadratureRule {
  std::vector<double> points;
  std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [0, 1].
[[nodiscard]] QuadratureRule gauss_legendre_unit(int n);

/// Values of the Lagrange basis on `nodes` at s.
void lagrange_values(std::span<const double> nodes, double s, std::span<double> out);

/// Monomial coefficients: row j holds the coefficients of basis polynomial j
/// in increasing powers of s.
[[nodiscard]] Eigen::MatrixXd lagrange_monomials(std::span<const double> nodes);

}  // namespace fracstep
