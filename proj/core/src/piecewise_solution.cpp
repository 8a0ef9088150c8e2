#include "fracstep/piecewise_solution.hpp"

#include <algorithm>
#include <cmath>

#include "fracstep/errors.hpp"
#include "fracstep/collocation.hpp"

namespace fracstep {

PiecewiseSolution::PiecewiseSolution(std::vector<double> basis_nodes, Eigen::VectorXd initial,
                                     double origin,
                                     std::shared_ptr<const PiecewiseSolution> history)
    : m_(static_cast<int>(basis_nodes.size()) - 1),
      ndof_(initial.size()),
      basis_(std::move(basis_nodes)),
      nodes_{0.0},
      data_(initial.data(), initial.data() + initial.size()),
      origin_(origin),
      history_(std::move(history)) {
  if (m_ < 1) {
    throw DomainError("piecewise solution: need at least two basis nodes");
  }
  if (!(origin_ >= 0.0)) {
    throw DomainError("piecewise solution: origin must be non-negative");
  }
  if (history_) {
    if (history_->origin() != 0.0 || history_->history() != nullptr) {
      throw DomainError("piecewise solution: history must be a flat solution");
    }
    if (history_->ndof() != ndof_ || history_->order() != m_) {
      throw DomainError("piecewise solution: history shape mismatch");
    }
    if (std::fabs(history_->end() - origin_) > 1e-14 * std::max(1.0, origin_)) {
      throw DomainError("piecewise solution: history must end at the origin");
    }
  } else if (origin_ != 0.0) {
    throw DomainError("piecewise solution: positive origin requires a history");
  }
}

Eigen::Map<const Eigen::MatrixXd> PiecewiseSolution::values() const {
  const auto cols = static_cast<Eigen::Index>(num_cells()) * m_ + 1;
  return {data_.data(), ndof_, cols};
}

Eigen::Map<const Eigen::MatrixXd> PiecewiseSolution::cell_values(std::size_t k) const {
  if (k >= num_cells()) {
    throw DomainError("piecewise solution: cell index out of range");
  }
  const auto offset = static_cast<std::size_t>(ndof_) * k * static_cast<std::size_t>(m_);
  return {data_.data() + offset, ndof_, m_ + 1};
}

Eigen::Map<const Eigen::VectorXd> PiecewiseSolution::final_value() const {
  return {data_.data() + data_.size() - static_cast<std::size_t>(ndof_), ndof_};
}

void PiecewiseSolution::append_cell(double right, const Eigen::Ref<const Eigen::MatrixXd>& values) {
  if (!(right > end())) {
    throw DomainError("piecewise solution: cell must have positive width");
  }
  if (values.rows() != ndof_ || values.cols() != m_) {
    throw DomainError("piecewise solution: cell block has the wrong shape");
  }
  nodes_.push_back(right);
  for (Eigen::Index j = 0; j < values.cols(); ++j) {
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
      data_.push_back(values(i, j));
    }
  }
}

void PiecewiseSolution::truncate(std::size_t cells) {
  if (cells >= num_cells()) {
    return;
  }
  nodes_.resize(cells + 1);
  data_.resize(static_cast<std::size_t>(ndof_) * (cells * static_cast<std::size_t>(m_) + 1));
}

std::size_t PiecewiseSolution::locate(double t) const {
  if (num_cells() == 0) {
    throw DomainError("piecewise solution: no cells");
  }
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t);
  const auto k = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - nodes_.begin() - 1, 0));
  return std::min(k, num_cells() - 1);
}

Eigen::VectorXd evaluate_in_cell(const PiecewiseSolution& sol, std::size_t k, double s) {
  const auto& basis = sol.basis_nodes();
  std::vector<double> phi(basis.size());
  lagrange_values(basis, s, phi);
  const auto block = sol.cell_values(k);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(sol.ndof());
  for (std::size_t j = 0; j < phi.size(); ++j) {
    if (basis[j] == s) {
      return block.col(static_cast<Eigen::Index>(j));
    }
    out += phi[j] * block.col(static_cast<Eigen::Index>(j));
  }
  return out;
}

Eigen::VectorXd evaluate(const PiecewiseSolution& sol, double t) {
  if (sol.num_cells() == 0) {
    if (t == 0.0) {
      return sol.final_value();
    }
    throw DomainError("evaluate: time outside the solution span");
  }
  if (!(t >= 0.0 && t <= sol.end())) {
    throw DomainError("evaluate: time outside the solution span");
  }
  const std::size_t k = sol.locate(t);
  const double a = sol.nodes()[k];
  const double b = sol.nodes()[k + 1];
  return evaluate_in_cell(sol, k, (t - a) / (b - a));
}

Eigen::VectorXd evaluate_global(const PiecewiseSolution& sol, double t) {
  if (t < sol.origin() && sol.history() != nullptr) {
    return evaluate(*sol.history(), t);
  }
  return evaluate(sol, t - sol.origin());
}

PiecewiseSolution flatten(const PiecewiseSolution& sol) {
  if (sol.history() == nullptr) {
    return sol;
  }
  PiecewiseSolution out = *sol.history();
  const auto m = static_cast<Eigen::Index>(sol.order());
  for (std::size_t k = 0; k < sol.num_cells(); ++k) {
    const double right = sol.origin() + sol.nodes()[k + 1];
    out.append_cell(right, sol.cell_values(k).rightCols(m));
  }
  return out;
}

}  // namespace fracstep
