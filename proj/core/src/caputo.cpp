#include "fracstep/caputo.hpp"

#include <algorithm>
#include <cmath>

#include "fracstep/errors.hpp"
#include "fracstep/special_functions.hpp"

namespace fracstep {
namespace {

// Coefficients of P(x + y) in powers of y, given those of P(x) (repeated synthetic division).
void taylor_shift(std::span<double> c, double x) {
  const auto n = c.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = n - 1; j > i; --j) {
      c[j - 1] += x * c[j];
    }
  }
}

// Gauss-Legendre points needed for a smooth kernel at ratio gap/width >= r, degree m - 1 integrand.
int far_field_points(double r, int m) {
  const double a = 1.0 + 2.0 * r;
  const double rho = a + std::sqrt(a * a - 1.0);
  const int n = static_cast<int>(std::ceil((m - 1 + 17.0 / std::log10(rho)) / 2.0));
  return std::max(n, m);
}

}  // namespace

CaputoOperator::CaputoOperator(double alpha, std::vector<double> basis_nodes)
    : alpha_(alpha), m_(static_cast<int>(basis_nodes.size()) - 1), basis_(std::move(basis_nodes)) {
  if (!(alpha_ > 0.0 && alpha_ < 1.0)) {
    throw DomainError("caputo operator: alpha must lie in (0, 1)");
  }
  if (m_ < 1) {
    throw DomainError("caputo operator: need at least two nodes");
  }
  inv_gamma_ = reciprocal_gamma(1.0 - alpha_);

  const Eigen::MatrixXd mono = lagrange_monomials(basis_);
  slope_coeffs_.resize(m_ + 1, m_);
  for (int p = 1; p <= m_; ++p) {
    slope_coeffs_.col(p - 1) = p * mono.col(p);
  }

  for (const double r : {1.0, 4.0, 40.0, 400.0, 4000.0}) {
    const QuadratureRule gl = gauss_legendre_unit(far_field_points(r, m_));
    Band band{r, gl.points, gl.weights, Eigen::MatrixXd(m_ + 1, gl.points.size())};
    for (std::size_t g = 0; g < gl.points.size(); ++g) {
      const double x = 1.0 - gl.points[g];
      for (int j = 0; j <= m_; ++j) {
        double v = 0.0;
        for (int p = m_ - 1; p >= 0; --p) {
          v = v * x + slope_coeffs_(j, p);
        }
        band.basis_slope(j, static_cast<Eigen::Index>(g)) = v * gl.weights[g];
      }
    }
    bands_.push_back(std::move(band));
  }

  colloc_.resize(m_, m_ + 1);
  std::vector<double> row(static_cast<std::size_t>(m_) + 1);
  for (int i = 1; i <= m_; ++i) {
    partial_weights(basis_[i], row);
    for (int j = 0; j <= m_; ++j) {
      colloc_(i - 1, j) = row[j];
    }
  }
}

void CaputoOperator::history_weights(double gap, double width, std::span<double> out) const {
  const double ratio = gap / width;
  if (ratio > bands_.front().min_ratio) {
    // Smooth kernel: (gap + width sigma)^-alpha with sigma measured back from the right end.
    const Band* band = &bands_.front();
    for (const auto& b : bands_) {
      if (ratio > b.min_ratio) {
        band = &b;
      }
    }
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t g = 0; g < band->sigma.size(); ++g) {
      const double k = std::pow(ratio + band->sigma[g], -alpha_);
      for (int j = 0; j <= m_; ++j) {
        out[j] += k * band->basis_slope(j, static_cast<Eigen::Index>(g));
      }
    }
  } else {
    // z = ratio + sigma, l_j'(1 - sigma) = l_j'(1 + ratio - z), integrate z^(p - alpha) exactly.
    const double w = 1.0 + ratio;
    const double top = std::pow(w, 1.0 - alpha_);
    const double bottom = ratio > 0.0 ? std::pow(ratio, 1.0 - alpha_) : 0.0;
    std::vector<double> c(static_cast<std::size_t>(m_));
    for (int j = 0; j <= m_; ++j) {
      for (int p = 0; p < m_; ++p) {
        c[p] = slope_coeffs_(j, p);
      }
      taylor_shift(c, w);
      double sum = 0.0;
      double wp = top;
      double rp = bottom;
      double sign = 1.0;
      for (int p = 0; p < m_; ++p) {
        sum += sign * c[p] * (wp - rp) / (p + 1.0 - alpha_);
        wp *= w;
        rp *= ratio;
        sign = -sign;
      }
      out[j] = sum;
    }
  }
  const double scale = inv_gamma_ * std::pow(width, -alpha_);
  for (int j = 0; j <= m_; ++j) {
    out[j] *= scale;
  }
}

void CaputoOperator::partial_weights(double s, std::span<double> out) const {
  if (!(s > 0.0)) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  // l_j'(s - y) in powers of y, integrated against y^-alpha over [0, s].
  std::vector<double> c(static_cast<std::size_t>(m_));
  const double base = std::pow(s, 1.0 - alpha_);
  for (int j = 0; j <= m_; ++j) {
    for (int p = 0; p < m_; ++p) {
      c[p] = slope_coeffs_(j, p);
    }
    taylor_shift(c, s);
    double sum = 0.0;
    double sp = base;
    double sign = 1.0;
    for (int p = 0; p < m_; ++p) {
      sum += sign * c[p] * sp / (p + 1.0 - alpha_);
      sp *= s;
      sign = -sign;
    }
    out[j] = sum * inv_gamma_;
  }
}

namespace {

void add_cells(const CaputoOperator& op, const PiecewiseSolution& sol, std::size_t ncells,
               double base, double anchor, std::span<const double> offsets,
               Eigen::Ref<Eigen::MatrixXd> out) {
  if (ncells == 0) {
    return;
  }
  const int m = op.order();
  const auto cols = static_cast<Eigen::Index>(ncells) * m + 1;
  const auto targets = static_cast<Eigen::Index>(offsets.size());
  Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(cols, targets);
  std::vector<double> w(static_cast<std::size_t>(m) + 1);
  const auto& nodes = sol.nodes();
  for (std::size_t k = 0; k < ncells; ++k) {
    const double width = nodes[k + 1] - nodes[k];
    const double head = (base - nodes[k + 1]) + anchor;
    for (Eigen::Index i = 0; i < targets; ++i) {
      const double gap = std::max(head + offsets[static_cast<std::size_t>(i)], 0.0);
      op.history_weights(gap, width, w);
      const auto row = static_cast<Eigen::Index>(k) * m;
      for (int p = 0; p <= m; ++p) {
        weights(row + p, i) += w[p];
      }
    }
  }
  out.noalias() += sol.values().leftCols(cols) * weights;
}

}  // namespace

void accumulate_history(const CaputoOperator& op, const PiecewiseSolution& sol,
                        std::size_t ncells, double anchor, std::span<const double> offsets,
                        Eigen::Ref<Eigen::MatrixXd> out) {
  if (out.rows() != sol.ndof() || out.cols() != static_cast<Eigen::Index>(offsets.size())) {
    throw DomainError("accumulate_history: output has the wrong shape");
  }
  add_cells(op, sol, ncells, 0.0, anchor, offsets, out);
  if (const PiecewiseSolution* h = sol.history()) {
    add_cells(op, *h, h->num_cells(), sol.origin(), anchor, offsets, out);
  }
}

Eigen::VectorXd caputo_eval(const CaputoOperator& op, const PiecewiseSolution& sol, double t) {
  if (sol.order() != op.order()) {
    throw DomainError("caputo_eval: order mismatch");
  }
  if (sol.num_cells() == 0 || !(t >= 0.0 && t <= sol.end())) {
    throw DomainError("caputo_eval: time outside the solution span");
  }
  const std::size_t k = sol.locate(t);
  const double a = sol.nodes()[k];
  const double width = sol.nodes()[k + 1] - a;
  const double offset = t - a;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(sol.ndof(), 1);
  accumulate_history(op, sol, k, a, std::span<const double>(&offset, 1), out);
  std::vector<double> w(static_cast<std::size_t>(op.order()) + 1);
  op.partial_weights(offset / width, w);
  const double scale = std::pow(width, -op.alpha());
  const auto block = sol.cell_values(k);
  for (int j = 0; j <= op.order(); ++j) {
    out.col(0) += scale * w[j] * block.col(j);
  }
  return out.col(0);
}

}  // namespace fracstep
