#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace fracstep {

/// Continuous piecewise polynomial in time with values in R^ndof.
///
/// Times are local: the solution lives on [0, end()] and global time is
/// origin() + local. A solution with a positive origin carries a history
/// covering [0, origin] in global time, which must itself have origin 0.
/// Values are stored column-major, one column per time node: column k*m + i
/// holds the value at node i of cell k.
class PiecewiseSolution {
 public:
  PiecewiseSolution(std::vector<double> basis_nodes, Eigen::VectorXd initial,
                    double origin = 0.0,
                    std::shared_ptr<const PiecewiseSolution> history = nullptr);

  [[nodiscard]] int order() const noexcept { return m_; }
  [[nodiscard]] Eigen::Index ndof() const noexcept { return ndof_; }
  [[nodiscard]] std::size_t num_cells() const noexcept { return nodes_.size() - 1; }
  [[nodiscard]] const std::vector<double>& nodes() const noexcept { return nodes_; }
  [[nodiscard]] const std::vector<double>& basis_nodes() const noexcept { return basis_; }
  [[nodiscard]] double origin() const noexcept { return origin_; }
  [[nodiscard]] double end() const noexcept { return nodes_.back(); }
  [[nodiscard]] const PiecewiseSolution* history() const noexcept { return history_.get(); }
  [[nodiscard]] const std::shared_ptr<const PiecewiseSolution>& history_ptr() const noexcept {
    return history_;
  }

  /// All nodal values, ndof x (m * cells + 1).
  [[nodiscard]] Eigen::Map<const Eigen::MatrixXd> values() const;
  /// Values of cell k at its m + 1 nodes.
  [[nodiscard]] Eigen::Map<const Eigen::MatrixXd> cell_values(std::size_t k) const;
  [[nodiscard]] Eigen::Map<const Eigen::VectorXd> final_value() const;

  /// Appends the cell [end(), right]; `values` holds nodes 1..m (ndof x m).
  void append_cell(double right, const Eigen::Ref<const Eigen::MatrixXd>& values);
  /// Keeps the first `cells` cells.
  void truncate(std::size_t cells);

  /// Cell owning local time t: the last k with nodes[k] <= t, limited to the final cell.
  [[nodiscard]] std::size_t locate(double t) const;

 private:
  int m_;
  Eigen::Index ndof_;
  std::vector<double> basis_;
  std::vector<double> nodes_;
  std::vector<double> data_;
  double origin_;
  std::shared_ptr<const PiecewiseSolution> history_;
};

/// Value of cell k at reference position s in [0, 1].
[[nodiscard]] Eigen::VectorXd evaluate_in_cell(const PiecewiseSolution& sol, std::size_t k,
                                               double s);
/// Value at local time t in [0, end()].
[[nodiscard]] Eigen::VectorXd evaluate(const PiecewiseSolution& sol, double t);
/// Value at global time t, reaching into the history for t < origin().
[[nodiscard]] Eigen::VectorXd evaluate_global(const PiecewiseSolution& sol, double t);

/// The history and the own cells merged into one solution with origin 0.
[[nodiscard]] PiecewiseSolution flatten(const PiecewiseSolution& sol);

}  // namespace fracstep
