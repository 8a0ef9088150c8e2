#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fracstep/collocation.hpp"
#include "fracstep/piecewise_solution.hpp"

namespace fracstep {

/// Caputo weights of the Lagrange basis on a fixed set of reference nodes.
class CaputoOperator {
 public:
  CaputoOperator(double alpha, std::vector<double> basis_nodes);

  [[nodiscard]] double alpha() const noexcept { return alpha_; }
  [[nodiscard]] int order() const noexcept { return m_; }
  [[nodiscard]] const std::vector<double>& basis_nodes() const noexcept { return basis_; }

  /// Contribution of a finished cell of the given width whose right end lies
  /// `gap` before the evaluation time: out[j] multiplies the value at node j.
  void history_weights(double gap, double width, std::span<double> out) const;

  /// Contribution of the current cell evaluated at reference position s, for
  /// unit width. Scale by width^-alpha.
  void partial_weights(double s, std::span<double> out) const;

  /// Row i - 1 holds partial_weights(c_i), i = 1..m.
  [[nodiscard]] const Eigen::MatrixXd& collocation_matrix() const noexcept { return colloc_; }

 private:
  struct Band {
    double min_ratio;
    std::vector<double> sigma;
    std::vector<double> weight;
    Eigen::MatrixXd basis_slope;  // (m + 1) x n: l_j'(1 - sigma_g) * weight_g
  };

  double alpha_;
  int m_;
  double inv_gamma_;  // 1 / Gamma(1 - alpha)
  std::vector<double> basis_;
  Eigen::MatrixXd slope_coeffs_;  // (m + 1) x m monomial coefficients of l_j'
  std::vector<Band> bands_;
  Eigen::MatrixXd colloc_;
};

/// Adds the Caputo contributions of cells [0, ncells) of `sol`, and of its
/// history, at local times anchor + offsets[i] to `out` (ndof x offsets).
/// Every evaluation time must lie at or after node `ncells`.
void accumulate_history(const CaputoOperator& op, const PiecewiseSolution& sol,
                        std::size_t ncells, double anchor, std::span<const double> offsets,
                        Eigen::Ref<Eigen::MatrixXd> out);

/// Caputo derivative of the piecewise polynomial at local time t.
[[nodiscard]] Eigen::VectorXd caputo_eval(const CaputoOperator& op, const PiecewiseSolution& sol,
                                          double t);

}  // namespace fracstep
