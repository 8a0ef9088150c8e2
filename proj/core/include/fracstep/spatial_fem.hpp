#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace fracstep {

using ScalarFunction = std::function<double(double)>;

enum class SpatialMode {
  finite_element,  // continuous cubic Lagrange elements, homogeneous Dirichlet data
  scalar,          // no spatial derivatives: one unknown, L[u] = c u
};

/// Coefficients of L[u] = -(a u')' + b u' + c u on [x_left, x_right].
/// An empty coefficient function stands for the zero function.
struct SpatialOperatorSpec {
  SpatialMode mode = SpatialMode::finite_element;
  double x_left = 0.0;
  double x_right = 1.0;
  int ncells = 1;
  ScalarFunction diffusion;
  ScalarFunction convection;
  ScalarFunction reaction;
  int sup_samples_per_cell = 4;     // interior sup-norm samples per cell
  int lambda_samples_per_cell = 10; // grid density for inf c(x)

  /// -u'' + c u with constant c on [x_left, x_right].
  [[nodiscard]] static SpatialOperatorSpec laplacian(double x_left, double x_right, int ncells,
                                                     double reaction = 0.0);
  /// The ODE case L[u] = c u.
  [[nodiscard]] static SpatialOperatorSpec scalar_reaction(double reaction);

  [[nodiscard]] bool symmetric() const noexcept { return !convection; }
  void validate() const;
};

/// Mass and operator matrices on the interior degrees of freedom.
struct AssembledOperator {
  SpatialMode mode = SpatialMode::finite_element;
  double x_left = 0.0;
  double cell_width = 0.0;
  int ncells = 0;
  bool symmetric = true;
  Eigen::MatrixXd mass;
  Eigen::MatrixXd stiffness;
  std::vector<double> dof_coords;
  std::vector<double> sample_coords;
  Eigen::MatrixXd sample_table;  // rows: sample points, columns: dofs

  [[nodiscard]] Eigen::Index ndof() const noexcept { return mass.rows(); }

  /// Load vector (int p phi_i) of a spatial profile.
  [[nodiscard]] Eigen::VectorXd load(const ScalarFunction& profile) const;
  /// L2 projection M^{-1} load(profile).
  [[nodiscard]] Eigen::VectorXd project(const ScalarFunction& profile) const;
  /// Value of the finite element function with the given coefficients at x.
  [[nodiscard]] double value_at(const Eigen::Ref<const Eigen::VectorXd>& coeffs, double x) const;
};

[[nodiscard]] AssembledOperator assemble(const SpatialOperatorSpec& spec);

/// inf over the domain of L[1] = c(x), sampled on a uniform grid.
[[nodiscard]] double compute_lambda(const SpatialOperatorSpec& spec);

/// Sup norm over the operator's sample table.
[[nodiscard]] double linf_norm(const AssembledOperator& op,
                               const Eigen::Ref<const Eigen::VectorXd>& coeffs);

}  // namespace fracstep
