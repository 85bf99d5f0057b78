#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "ssem/assembly/constraints.hpp"
#include "ssem/assembly/smoother.hpp"
#include "ssem/geometry/sampling.hpp"
#include "ssem/solver/solver.hpp"
#include "ssem/spectral/axis.hpp"

namespace ssem {

/// m x m spatial roots grid times n+1 time extrema on [t_lo, t_hi]. Time is
/// the last (fastest) axis of the tensor grid.
struct SpaceTimeGrid {
  std::size_t m = 0;
  std::size_t n = 0;
  TensorGrid grid;

  const ExtremaAxis& time_axis() const { return std::get<ExtremaAxis>(grid.axis(2)); }
  const RootsAxis& space_axis() const { return grid.roots_axis_at(0); }
  std::size_t time_size() const { return n + 1; }
};

[[nodiscard]] inline SpaceTimeGrid make_spacetime_grid(std::size_t m, std::size_t n, double t_lo = 0.0,
                                                       double t_hi = 2.0) {
  const auto space = roots_axis(m);
  return {m, n, TensorGrid({space, space, extrema_axis(n, t_lo, t_hi)})};
}

/// First-derivative matrix on the extrema nodes, rescaled to the axis interval.
/// Off-diagonal entries (c_i / c_j) (-1)^(i+j) / (s_i - s_j) with c_0 = c_n = 2
/// and c_j = 1 otherwise; the diagonal makes every row sum to zero.
[[nodiscard]] inline Eigen::MatrixXd time_diff_matrix(const ExtremaAxis& axis) {
  const std::size_t n = axis.n;
  if (n < 1) throw InvalidArgument("time_diff_matrix: n must be at least 1");
  std::vector<double> s(n + 1);
  for (std::size_t j = 0; j <= n; ++j)
    s[j] = -std::cos(std::numbers::pi * static_cast<double>(j) / static_cast<double>(n));
  const auto c = [n](std::size_t j) { return (j == 0 || j == n) ? 2.0 : 1.0; };
  const auto sz = static_cast<Eigen::Index>(n + 1);
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(sz, sz);
  for (std::size_t i = 0; i <= n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      if (i == j) continue;
      const double sign = ((i + j) % 2) ? -1.0 : 1.0;
      const double v = c(i) / c(j) * sign / (s[i] - s[j]);
      d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      row_sum += v;
    }
    d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = -row_sum;
  }
  return d * (2.0 / (axis.hi - axis.lo));
}

/// u_t - Laplace u = 0 on domain x (t_lo, t_hi], u = u0 at t_lo, u = g on the
/// lateral boundary.
struct ParabolicProblem {
  DomainSpec domain;
  ScalarField u0;
  std::function<double(std::span<const double> y, double t)> g;
  /// Exact solution u(x, t), if known.
  std::function<double(std::span<const double> x, double t)> exact;
};

/// Rows, in order: A on Omega^m x {t_j > t_lo}, B_1 on Omega^m x {t_lo},
/// B_2 on Gamma^m x {t_j > t_lo}. The right-hand side is (0; u0; g).
[[nodiscard]] inline ConstraintSystem assemble_parabolic(const ParabolicProblem& problem,
                                                         const SpaceTimeGrid& st) {
  if (problem.domain.dim != 2) throw InvalidArgument("assemble_parabolic: spatial domain must be 2D");
  const std::size_t nt = st.time_size();
  const auto space_grid = TensorGrid::roots(2, st.m);
  ConstraintSystem sys;
  sys.grid = st.grid;
  sys.interior = classify_interior(problem.domain, space_grid);
  sys.boundary = sample_boundary_2d(problem.domain, st.m);
  const auto& times = st.time_axis().nodes;

  std::vector<std::size_t> a_rows, b1_rows;
  for (auto s : sys.interior.indices) {
    b1_rows.push_back(s * nt);
    for (std::size_t j = 1; j < nt; ++j) a_rows.push_back(s * nt + j);
  }
  const auto dm = differentiation_matrices(st.space_axis());
  const auto d2 = std::make_shared<const Eigen::MatrixXd>(dm.second);
  const auto dt = std::make_shared<const Eigen::MatrixXd>(time_diff_matrix(st.time_axis()));
  auto a = std::make_shared<RestrictedOperatorBlock>(sys.grid.shape(), a_rows);
  a->add_term(std::vector<double>(a_rows.size(), 1.0), {{2, dt}});
  a->add_term(std::vector<double>(a_rows.size(), -1.0), {{0, d2}});
  a->add_term(std::vector<double>(a_rows.size(), -1.0), {{1, d2}});
  auto b1 = std::make_shared<RestrictedOperatorBlock>(sys.grid.shape(), b1_rows);
  b1->add_term(std::vector<double>(b1_rows.size(), 1.0), {});

  const auto axes = roots_axes(space_grid);
  std::vector<SeparableRow> b2_rows;
  for (const auto& y : sys.boundary.points) {
    const auto spatial = bary_interp_row(axes, y);
    for (std::size_t j = 1; j < nt; ++j) {
      std::vector<double> e(nt, 0.0);
      e[j] = 1.0;
      SeparableRow row = spatial;
      row.extend(e);
      b2_rows.push_back(std::move(row));
    }
  }

  sys.rhs.assign(a_rows.size(), 0.0);
  for (auto s : sys.interior.indices) sys.rhs.push_back(problem.u0 ? problem.u0(space_grid.point(s)) : 0.0);
  for (const auto& y : sys.boundary.points)
    for (std::size_t j = 1; j < nt; ++j) sys.rhs.push_back(problem.g ? problem.g(y, times[j]) : 0.0);

  sys.n_omega = a_rows.size();
  sys.n_gamma = b2_rows.size();
  sys.blocks.push_back(a);
  sys.blocks.push_back(b1);
  sys.blocks.push_back(std::make_shared<SeparableRowBlock>(sys.grid.shape(), std::move(b2_rows)));
  return sys;
}

/// Space-time smoother: multiplier (1 + |k_x|^2 + k_t^2)^(-p/2) on the
/// mixed roots / extrema Chebyshev coefficients.
[[nodiscard]] inline Smoother spacetime_smoother(const SpaceTimeGrid& st, double p) {
  return Smoother(st.grid, SmootherSpec::power(p));
}

[[nodiscard]] inline SolveReport solve_parabolic(const ParabolicProblem& problem, const SpaceTimeGrid& st,
                                                 double p, bool with_condition = true) {
  return pinv_solve(assemble_parabolic(problem, st), spacetime_smoother(st, p), with_condition);
}

/// J_0 by its power series, truncated once terms drop below 1e-17 relative.
[[nodiscard]] inline double bessel_j0(double r) {
  const double q = 0.25 * r * r;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= -q / (static_cast<double>(k) * static_cast<double>(k));
    sum += term;
    if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum))) break;
  }
  return sum;
}

}  // namespace ssem
