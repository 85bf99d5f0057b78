#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ssem/spectral/axis.hpp"
#include "ssem/spectral/tensor.hpp"
#include "ssem/spectral/transform.hpp"

namespace ssem {

// Spectral derivatives on a roots axis. With u = sum_j c_j T_j and x = cos(theta):
//   u'  = (1/sin theta) sum_j j c_j sin(j theta)
//   u'' = -(1/sin^2 theta) sum_j j^2 c_j cos(j theta)
//         + (cos theta / sin^3 theta) sum_j j c_j sin(j theta)
// The sums are evaluated with dct3 / dst3; the shift moves frequency j to
// slot j-1 of the sine transform input.

/// Calibration constant multiplying k on the unnormalized DCT-II output.
inline double derivative_scale(std::size_t m) { return 1.0 / (2.0 * static_cast<double>(m)); }

inline void diff1_line(const RootsAxis& axis, std::span<const double> u, std::span<double> du,
                       Backend backend = Backend::fast) {
  const std::size_t m = axis.m;
  std::vector<double> y(m), shifted(m, 0.0), s(m);
  trig_transform(TrigKind::dct2, u, y, backend);
  const double scale = derivative_scale(m);
  for (std::size_t j = 1; j < m; ++j) shifted[j - 1] = static_cast<double>(j) * scale * y[j];
  trig_transform(TrigKind::dst3, shifted, s, backend);
  for (std::size_t k = 0; k < m; ++k) du[k] = s[k] / std::sin(axis.angles[k]);
}

inline void diff2_line(const RootsAxis& axis, std::span<const double> u, std::span<double> d2u,
                       Backend backend = Backend::fast) {
  const std::size_t m = axis.m;
  std::vector<double> y(m), first(m, 0.0), second(m, 0.0), s(m), c(m);
  trig_transform(TrigKind::dct2, u, y, backend);
  const double scale = derivative_scale(m);
  for (std::size_t j = 1; j < m; ++j) {
    const double k = static_cast<double>(j);
    first[j - 1] = k * scale * y[j];
    second[j] = k * k * scale * y[j];
  }
  trig_transform(TrigKind::dst3, first, s, backend);
  trig_transform(TrigKind::dct3, second, c, backend);
  for (std::size_t k = 0; k < m; ++k) {
    const double x = axis.nodes[k];
    const double sn = std::sin(axis.angles[k]);
    d2u[k] = -c[k] / (sn * sn) + x * s[k] / (sn * sn * sn);
  }
}

/// Dense m x m matrices of the line operators, built column by column from
/// the transform route.
struct DifferentiationMatrices {
  Eigen::MatrixXd first;
  Eigen::MatrixXd second;
};

[[nodiscard]] inline DifferentiationMatrices differentiation_matrices(const RootsAxis& axis) {
  const std::size_t m = axis.m;
  DifferentiationMatrices d{Eigen::MatrixXd(m, m), Eigen::MatrixXd(m, m)};
  std::vector<double> e(m, 0.0), col(m);
  for (std::size_t j = 0; j < m; ++j) {
    e[j] = 1.0;
    diff1_line(axis, e, col);
    for (std::size_t i = 0; i < m; ++i) d.first(i, j) = col[i];
    diff2_line(axis, e, col);
    for (std::size_t i = 0; i < m; ++i) d.second(i, j) = col[i];
    e[j] = 0.0;
  }
  return d;
}

/// out = (I x ... x op x ... x I) in, with op acting on `axis`. When
/// `transpose` is set, op^T is applied instead.
inline void apply_axis_matrix(std::span<const double> in, std::span<double> out,
                              const Shape& shape, std::size_t axis, const Eigen::MatrixXd& op,
                              bool transpose = false) {
  const std::size_t len = shape[axis];
  std::vector<double> line(len);
  for_each_line(shape, axis, [&](std::size_t base, std::size_t stride) {
    for (std::size_t k = 0; k < len; ++k) line[k] = in[base + k * stride];
    for (std::size_t i = 0; i < len; ++i) {
      double s = 0.0;
      if (transpose)
        for (std::size_t k = 0; k < len; ++k) s += op(k, i) * line[k];
      else
        for (std::size_t k = 0; k < len; ++k) s += op(i, k) * line[k];
      out[base + i * stride] = s;
    }
  });
}

/// Derivative along `axis` of the tensor interpolant, at the nodes.
[[nodiscard]] inline GridFunction diff1(const GridFunction& u, const TensorGrid& grid,
                                        std::size_t axis, Backend backend = Backend::fast) {
  if (axis >= grid.dim()) throw InvalidArgument("diff1: axis out of range");
  if (u.shape() != grid.shape()) throw InvalidArgument("diff1: shape mismatch");
  const RootsAxis& ax = grid.roots_axis_at(axis);
  GridFunction du(u.shape(), u.data());
  transform_lines(du.values(), du.shape(), axis,
                  [&](auto in, auto out) { diff1_line(ax, in, out, backend); });
  return du;
}

/// Second derivative along (axis_i, axis_j); mixed derivatives compose diff1.
[[nodiscard]] inline GridFunction diff2(const GridFunction& u, const TensorGrid& grid,
                                        std::size_t axis_i, std::size_t axis_j,
                                        Backend backend = Backend::fast) {
  if (axis_i >= grid.dim() || axis_j >= grid.dim())
    throw InvalidArgument("diff2: axis out of range");
  if (axis_i != axis_j)
    return diff1(diff1(u, grid, axis_i, backend), grid, axis_j, backend);
  if (u.shape() != grid.shape()) throw InvalidArgument("diff2: shape mismatch");
  const RootsAxis& ax = grid.roots_axis_at(axis_i);
  GridFunction d2u(u.shape(), u.data());
  transform_lines(d2u.values(), d2u.shape(), axis_i,
                  [&](auto in, auto out) { diff2_line(ax, in, out, backend); });
  return d2u;
}

}  // namespace ssem
