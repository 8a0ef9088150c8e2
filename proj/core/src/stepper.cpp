#include "fracstep/stepper.hpp"

#include <algorithm>
#include <cmath>

#include "fracstep/errors.hpp"

namespace fracstep {
namespace {

std::vector<double> default_samples(const CollocationRule& rule, int q) {
  std::vector<double> s;
  const int m = rule.m;
  for (int i = 0; i < m; ++i) {
    s.push_back(0.5 * (rule.nodes[i] + rule.nodes[i + 1]));
  }
  double c = rule.nodes[1];
  for (int j = 0; static_cast<int>(s.size()) < q; ++j) {
    c /= 4.0;
    s.push_back(c);
  }
  s.resize(static_cast<std::size_t>(q));
  std::sort(s.begin(), s.end());
  return s;
}

}  // namespace

CollocationStepper::CollocationStepper(ProblemSpec problem, AssembledOperator op,
                                       CollocationRule rule, int residual_samples,
                                       Solver solver)
    : problem_(std::move(problem)),
      op_(std::move(op)),
      rule_(std::move(rule)),
      caputo_(problem_.alpha, rule_.nodes) {
  problem_.validate();
  rule_.validate();
  const int q = residual_samples > 0 ? residual_samples : 2 * rule_.m;
  samples_ = default_samples(rule_, q);
  for (const double s : samples_) {
    bounds_.push_back(*std::lower_bound(rule_.nodes.begin() + 1, rule_.nodes.end(), s));
  }

  const Eigen::LLT<Eigen::MatrixXd> mass(op_.mass);
  if (mass.info() != Eigen::Success) {
    throw SingularSystemError("stepper: mass matrix is not positive definite");
  }
  reaction_ = mass.solve(op_.stiffness);
  profiles_.resize(op_.ndof(), static_cast<Eigen::Index>(problem_.pieces.size()));
  for (std::size_t k = 0; k < problem_.pieces.size(); ++k) {
    profiles_.col(static_cast<Eigen::Index>(k)) = op_.project(problem_.pieces[k].spatial_profile);
  }
  initial_ = problem_.initial ? op_.project(problem_.initial)
                              : Eigen::VectorXd::Zero(op_.ndof()).eval();

  modal_ = solver == Solver::modal || (solver == Solver::automatic && op_.symmetric);
  if (modal_) {
    if (!op_.symmetric) {
      throw ConfigError("stepper: the modal solver needs a symmetric operator");
    }
    const Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(op_.stiffness, op_.mass);
    if (eig.info() != Eigen::Success) {
      throw SingularSystemError("stepper: generalized eigensolver failed");
    }
    modes_ = eig.eigenvectors();
    eigenvalues_ = eig.eigenvalues();
    modes_inv_ = modes_.transpose() * op_.mass;
  }
}

PiecewiseSolution CollocationStepper::initial_solution() const {
  return PiecewiseSolution(rule_.nodes, initial_);
}

PiecewiseSolution CollocationStepper::continuation(
    std::shared_ptr<const PiecewiseSolution> history) const {
  if (!history) {
    return initial_solution();
  }
  const double origin = history->end();
  Eigen::VectorXd start = history->final_value();
  return PiecewiseSolution(rule_.nodes, std::move(start), origin, std::move(history));
}

Eigen::VectorXd CollocationStepper::forcing(const TimePoint& t) const {
  std::vector<double> g(problem_.pieces.size());
  temporal_values(problem_, t, g);
  return profiles_ * Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size()));
}

Eigen::MatrixXd CollocationStepper::solve_system(const Eigen::MatrixXd& rhs, double width) const {
  const int m = rule_.m;
  const Eigen::Index n = op_.ndof();
  const double scale = std::pow(width, -problem_.alpha);
  const Eigen::MatrixXd coupling = scale * caputo_.collocation_matrix().rightCols(m);
  Eigen::MatrixXd out(n, m);
  if (modal_) {
    const Eigen::MatrixXd projected = modes_inv_ * rhs;
    Eigen::MatrixXd y(n, m);
    for (Eigen::Index d = 0; d < n; ++d) {
      Eigen::MatrixXd block = coupling;
      block.diagonal().array() += eigenvalues_(d);
      const Eigen::PartialPivLU<Eigen::MatrixXd> lu(block);
      if (!(std::fabs(lu.determinant()) > 0.0) || lu.rcond() < 1e-14) {
        throw SingularSystemError("stepper: singular collocation system");
      }
      y.row(d) = lu.solve(projected.row(d).transpose()).transpose();
    }
    out.noalias() = modes_ * y;
  } else {
    Eigen::MatrixXd system = Eigen::MatrixXd::Zero(n * m, n * m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        auto block = system.block(i * n, j * n, n, n);
        block.diagonal().array() += coupling(i, j);
        if (i == j) {
          block += reaction_;
        }
      }
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(system);
    if (lu.rcond() < 1e-14) {
      throw SingularSystemError("stepper: singular collocation system");
    }
    const Eigen::VectorXd x =
        lu.solve(Eigen::Map<const Eigen::VectorXd>(rhs.data(), rhs.size()));
    out = Eigen::Map<const Eigen::MatrixXd>(x.data(), n, m);
  }
  return out;
}

Eigen::MatrixXd CollocationStepper::solve_cell(const PiecewiseSolution& prev, double right) const {
  const int m = rule_.m;
  const double left = prev.end();
  const double width = right - left;
  if (!(width > 0.0)) {
    throw DomainError("solve_cell: cell must have positive width");
  }
  std::vector<double> offsets(static_cast<std::size_t>(m));
  for (int i = 1; i <= m; ++i) {
    offsets[i - 1] = rule_.nodes[i] * width;
  }
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(op_.ndof(), m);
  accumulate_history(caputo_, prev, prev.num_cells(), left, offsets, rhs);
  rhs = -rhs;
  const double scale = std::pow(width, -problem_.alpha);
  const auto u0 = prev.final_value();
  for (int i = 1; i <= m; ++i) {
    rhs.col(i - 1) += forcing({prev.origin(), left, rule_.rhs_position(i) * width});
    rhs.col(i - 1) -= scale * caputo_.collocation_matrix()(i - 1, 0) * u0;
  }
  return solve_system(rhs, width);
}

Eigen::MatrixXd CollocationStepper::residual_block(const Eigen::MatrixXd& history,
                                                   const PiecewiseSolution& sol,
                                                   const Eigen::Ref<const Eigen::MatrixXd>& cell,
                                                   double left, double width,
                                                   std::span<const double> positions) const {
  const int m = rule_.m;
  const double scale = std::pow(width, -problem_.alpha);
  std::vector<double> w(static_cast<std::size_t>(m) + 1);
  std::vector<double> phi(static_cast<std::size_t>(m) + 1);
  Eigen::MatrixXd out(op_.ndof(), static_cast<Eigen::Index>(positions.size()));
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const double s = positions[i];
    caputo_.partial_weights(s, w);
    lagrange_values(rule_.nodes, s, phi);
    Eigen::VectorXd caputo = history.col(static_cast<Eigen::Index>(i));
    Eigen::VectorXd value = Eigen::VectorXd::Zero(op_.ndof());
    for (int j = 0; j <= m; ++j) {
      caputo += scale * w[j] * cell.col(j);
      value += phi[j] * cell.col(j);
    }
    out.col(static_cast<Eigen::Index>(i)) =
        forcing({sol.origin(), left, s * width}) - caputo - reaction_ * value;
  }
  return out;
}

CellAttempt CollocationStepper::attempt(const PiecewiseSolution& prev, double right) const {
  const int m = rule_.m;
  const double left = prev.end();
  const double width = right - left;
  if (!(width > 0.0)) {
    throw DomainError("attempt: cell must have positive width");
  }
  // One history pass serves the collocation nodes and the residual samples.
  std::vector<double> offsets;
  for (int i = 1; i <= m; ++i) {
    offsets.push_back(rule_.nodes[i] * width);
  }
  for (const double s : samples_) {
    offsets.push_back(s * width);
  }
  Eigen::MatrixXd history = Eigen::MatrixXd::Zero(op_.ndof(), static_cast<Eigen::Index>(offsets.size()));
  accumulate_history(caputo_, prev, prev.num_cells(), left, offsets, history);

  const double scale = std::pow(width, -problem_.alpha);
  const auto u0 = prev.final_value();
  Eigen::MatrixXd rhs = -history.leftCols(m);
  for (int i = 1; i <= m; ++i) {
    rhs.col(i - 1) += forcing({prev.origin(), left, rule_.rhs_position(i) * width});
    rhs.col(i - 1) -= scale * caputo_.collocation_matrix()(i - 1, 0) * u0;
  }

  CellAttempt out;
  out.right = right;
  out.width = width;
  out.values = solve_system(rhs, width);

  Eigen::MatrixXd cell(op_.ndof(), m + 1);
  cell.col(0) = u0;
  cell.rightCols(m) = out.values;
  const Eigen::MatrixXd res = residual_block(history.rightCols(static_cast<Eigen::Index>(samples_.size())),
                                             prev, cell, left, width, samples_);
  out.residuals.reserve(samples_.size());
  for (Eigen::Index i = 0; i < res.cols(); ++i) {
    out.residuals.push_back(linf_norm(op_, res.col(i)));
  }
  return out;
}

Eigen::MatrixXd CollocationStepper::residual(const PiecewiseSolution& sol, std::size_t k,
                                             std::span<const double> positions) const {
  const double left = sol.nodes().at(k);
  const double width = sol.nodes().at(k + 1) - left;
  std::vector<double> offsets;
  for (const double s : positions) {
    offsets.push_back(s * width);
  }
  Eigen::MatrixXd history = Eigen::MatrixXd::Zero(op_.ndof(), static_cast<Eigen::Index>(offsets.size()));
  accumulate_history(caputo_, sol, k, left, offsets, history);
  return residual_block(history, sol, sol.cell_values(k), left, width, positions);
}

std::vector<std::pair<double, double>> CollocationStepper::residual_samples(
    const PiecewiseSolution& sol, std::size_t k) const {
  const Eigen::MatrixXd res = residual(sol, k, samples_);
  const double left = sol.nodes().at(k);
  const double width = sol.nodes().at(k + 1) - left;
  std::vector<std::pair<double, double>> out;
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    out.emplace_back(left + samples_[i] * width, linf_norm(op_, res.col(static_cast<Eigen::Index>(i))));
  }
  return out;
}

}  // namespace fracstep
