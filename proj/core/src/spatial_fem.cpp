#include "fracstep/spatial_fem.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "fracstep/errors.hpp"

namespace fracstep {
namespace {

constexpr std::array<double, 4> kRefNodes = {0.0, 1.0 / 3.0, 2.0 / 3.0, 1.0};

// 4-point Gauss-Legendre on [0, 1].
struct GaussRule {
  std::array<double, 4> x;
  std::array<double, 4> w;
};

GaussRule gauss4() {
  const double a = std::sqrt(3.0 / 7.0 - 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  const double b = std::sqrt(3.0 / 7.0 + 2.0 / 7.0 * std::sqrt(6.0 / 5.0));
  const double wa = (18.0 + std::sqrt(30.0)) / 36.0;
  const double wb = (18.0 - std::sqrt(30.0)) / 36.0;
  return {{0.5 * (1 - b), 0.5 * (1 - a), 0.5 * (1 + a), 0.5 * (1 + b)},
          {0.5 * wb, 0.5 * wa, 0.5 * wa, 0.5 * wb}};
}

double shape(int i, double xi) {
  double v = 1.0;
  for (int j = 0; j < 4; ++j) {
    if (j != i) {
      v *= (xi - kRefNodes[j]) / (kRefNodes[i] - kRefNodes[j]);
    }
  }
  return v;
}

double shape_derivative(int i, double xi) {
  double sum = 0.0;
  for (int k = 0; k < 4; ++k) {
    if (k == i) {
      continue;
    }
    double term = 1.0 / (kRefNodes[i] - kRefNodes[k]);
    for (int j = 0; j < 4; ++j) {
      if (j != i && j != k) {
        term *= (xi - kRefNodes[j]) / (kRefNodes[i] - kRefNodes[j]);
      }
    }
    sum += term;
  }
  return sum;
}

double eval_or_zero(const ScalarFunction& f, double x) { return f ? f(x) : 0.0; }

// Interior dof index of local node `a` in cell `e`, or -1 on the boundary.
Eigen::Index dof_index(int e, int a, int ncells) {
  const int global = 3 * e + a;
  if (global == 0 || global == 3 * ncells) {
    return -1;
  }
  return global - 1;
}

}  // namespace

SpatialOperatorSpec SpatialOperatorSpec::laplacian(double x_left, double x_right, int ncells,
                                                   double reaction) {
  SpatialOperatorSpec s;
  s.mode = SpatialMode::finite_element;
  s.x_left = x_left;
  s.x_right = x_right;
  s.ncells = ncells;
  s.diffusion = [](double) { return 1.0; };
  if (reaction != 0.0) {
    s.reaction = [reaction](double) { return reaction; };
  }
  return s;
}

SpatialOperatorSpec SpatialOperatorSpec::scalar_reaction(double reaction) {
  SpatialOperatorSpec s;
  s.mode = SpatialMode::scalar;
  s.ncells = 1;
  s.reaction = [reaction](double) { return reaction; };
  return s;
}

void SpatialOperatorSpec::validate() const {
  if (!(x_left < x_right)) {
    throw ConfigError("spatial operator: x_left must be smaller than x_right");
  }
  if (ncells < 1) {
    throw ConfigError("spatial operator: ncells must be at least 1");
  }
  if (sup_samples_per_cell < 0 || lambda_samples_per_cell < 1) {
    throw ConfigError("spatial operator: invalid sampling density");
  }
  if (mode == SpatialMode::scalar) {
    if (ncells != 1 || convection) {
      throw ConfigError("spatial operator: scalar mode needs one cell and no convection");
    }
    return;
  }
  if (!diffusion) {
    throw ConfigError("spatial operator: finite element mode needs a diffusion coefficient");
  }
  const int n = lambda_samples_per_cell * ncells;
  for (int i = 0; i <= n; ++i) {
    const double x = x_left + (x_right - x_left) * i / n;
    if (!(diffusion(x) > 0.0)) {
      throw ConfigError("spatial operator: diffusion must be positive, fails at x = " +
                        std::to_string(x));
    }
  }
}

AssembledOperator assemble(const SpatialOperatorSpec& spec) {
  spec.validate();
  AssembledOperator op;
  op.mode = spec.mode;
  op.symmetric = spec.symmetric();
  op.x_left = spec.x_left;
  op.ncells = spec.ncells;
  op.cell_width = (spec.x_right - spec.x_left) / spec.ncells;

  if (spec.mode == SpatialMode::scalar) {
    const double mid = 0.5 * (spec.x_left + spec.x_right);
    op.mass = Eigen::MatrixXd::Identity(1, 1);
    op.stiffness = Eigen::MatrixXd::Constant(1, 1, eval_or_zero(spec.reaction, mid));
    op.dof_coords = {mid};
    op.sample_coords = {mid};
    op.sample_table = Eigen::MatrixXd::Identity(1, 1);
    return op;
  }

  const int n = spec.ncells;
  const Eigen::Index ndof = 3 * n - 1;
  const double h = op.cell_width;
  op.mass = Eigen::MatrixXd::Zero(ndof, ndof);
  op.stiffness = Eigen::MatrixXd::Zero(ndof, ndof);
  op.dof_coords.resize(static_cast<std::size_t>(ndof));
  for (Eigen::Index i = 0; i < ndof; ++i) {
    op.dof_coords[static_cast<std::size_t>(i)] = spec.x_left + h * static_cast<double>(i + 1) / 3.0;
  }

  const GaussRule g = gauss4();
  for (int e = 0; e < n; ++e) {
    const double x0 = spec.x_left + e * h;
    for (int q = 0; q < 4; ++q) {
      const double xi = g.x[q];
      const double x = x0 + h * xi;
      const double wq = g.w[q] * h;
      const double a = eval_or_zero(spec.diffusion, x);
      const double b = eval_or_zero(spec.convection, x);
      const double c = eval_or_zero(spec.reaction, x);
      std::array<double, 4> phi{};
      std::array<double, 4> dphi{};
      for (int i = 0; i < 4; ++i) {
        phi[i] = shape(i, xi);
        dphi[i] = shape_derivative(i, xi) / h;
      }
      for (int i = 0; i < 4; ++i) {
        const Eigen::Index gi = dof_index(e, i, n);
        if (gi < 0) {
          continue;
        }
        for (int j = 0; j < 4; ++j) {
          const Eigen::Index gj = dof_index(e, j, n);
          if (gj < 0) {
            continue;
          }
          // row: test function i, column: trial function j
          op.mass(gi, gj) += wq * phi[i] * phi[j];
          op.stiffness(gi, gj) += wq * (a * dphi[j] * dphi[i] + b * dphi[j] * phi[i] + c * phi[j] * phi[i]);
        }
      }
    }
  }

  const int interior = spec.sup_samples_per_cell;
  const auto rows = static_cast<Eigen::Index>(3 * n + 1 + interior * n);
  op.sample_table = Eigen::MatrixXd::Zero(rows, ndof);
  op.sample_coords.reserve(static_cast<std::size_t>(rows));
  Eigen::Index row = 0;
  auto add_sample = [&](int e, double xi) {
    op.sample_coords.push_back(spec.x_left + h * (e + xi));
    for (int a = 0; a < 4; ++a) {
      const Eigen::Index gi = dof_index(e, a, n);
      if (gi >= 0) {
        op.sample_table(row, gi) = shape(a, xi);
      }
    }
    ++row;
  };
  for (int e = 0; e < n; ++e) {
    for (int a = 0; a < 3; ++a) {
      add_sample(e, kRefNodes[a]);
    }
    for (int k = 1; k <= interior; ++k) {
      add_sample(e, static_cast<double>(k) / (interior + 1));
    }
  }
  add_sample(n - 1, 1.0);
  return op;
}

Eigen::VectorXd AssembledOperator::load(const ScalarFunction& profile) const {
  if (mode == SpatialMode::scalar) {
    return Eigen::VectorXd::Constant(1, profile ? profile(dof_coords.front()) : 0.0);
  }
  Eigen::VectorXd b = Eigen::VectorXd::Zero(ndof());
  if (!profile) {
    return b;
  }
  const GaussRule g = gauss4();
  for (int e = 0; e < ncells; ++e) {
    for (int q = 0; q < 4; ++q) {
      const double fx = profile(x_left + cell_width * (e + g.x[q]));
      for (int a = 0; a < 4; ++a) {
        const Eigen::Index gi = dof_index(e, a, ncells);
        if (gi >= 0) {
          b(gi) += g.w[q] * cell_width * fx * shape(a, g.x[q]);
        }
      }
    }
  }
  return b;
}

Eigen::VectorXd AssembledOperator::project(const ScalarFunction& profile) const {
  return mass.llt().solve(load(profile));
}

double AssembledOperator::value_at(const Eigen::Ref<const Eigen::VectorXd>& coeffs, double x) const {
  if (coeffs.size() != ndof()) {
    throw DomainError("value_at: coefficient vector has wrong length");
  }
  if (mode == SpatialMode::scalar) {
    return coeffs(0);
  }
  const double rel = (x - x_left) / cell_width;
  if (rel < 0.0 || rel > ncells) {
    throw DomainError("value_at: x outside the spatial domain");
  }
  const int e = std::min(static_cast<int>(rel), ncells - 1);
  const double xi = rel - e;
  double v = 0.0;
  for (int a = 0; a < 4; ++a) {
    const Eigen::Index gi = dof_index(e, a, ncells);
    if (gi >= 0) {
      v += coeffs(gi) * shape(a, xi);
    }
  }
  return v;
}

double compute_lambda(const SpatialOperatorSpec& spec) {
  if (!spec.reaction) {
    return 0.0;
  }
  if (spec.mode == SpatialMode::scalar) {
    return spec.reaction(0.5 * (spec.x_left + spec.x_right));
  }
  const int n = spec.lambda_samples_per_cell * spec.ncells;
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    lo = std::min(lo, spec.reaction(spec.x_left + (spec.x_right - spec.x_left) * i / n));
  }
  return lo;
}

double linf_norm(const AssembledOperator& op, const Eigen::Ref<const Eigen::VectorXd>& coeffs) {
  if (coeffs.size() != op.ndof()) {
    throw DomainError("linf_norm: coefficient vector length " + std::to_string(coeffs.size()) +
                      " does not match " + std::to_string(op.ndof()) + " dofs");
  }
  return (op.sample_table * coeffs).cwiseAbs().maxCoeff();
}

}  // namespace fracstep
