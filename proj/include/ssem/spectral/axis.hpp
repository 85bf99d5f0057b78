#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <variant>
#include <vector>

#include "ssem/error.hpp"

namespace ssem {

/// The m roots of T_m, x_k = cos(theta_k) with theta_k = pi (2k+1) / (2m).
/// Nodes are ordered by ascending k, i.e. descending x.
struct RootsAxis {
  std::size_t m = 0;
  std::vector<double> angles;
  std::vector<double> nodes;

  std::size_t size() const noexcept { return m; }
};

[[nodiscard]] inline RootsAxis roots_axis(std::size_t m) {
  if (m == 0) throw InvalidArgument("roots_axis: m must be positive");
  RootsAxis axis;
  axis.m = m;
  axis.angles.resize(m);
  axis.nodes.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double theta = std::numbers::pi * static_cast<double>(2 * k + 1) /
                         static_cast<double>(2 * m);
    axis.angles[k] = theta;
    axis.nodes[k] = std::cos(theta);
  }
  return axis;
}

/// n+1 Chebyshev extrema on [lo, hi]: t_j is the affine image of
/// -cos(pi j / n), so t_0 = lo and t_n = hi exactly.
struct ExtremaAxis {
  std::size_t n = 0;
  double lo = -1.0;
  double hi = 1.0;
  std::vector<double> nodes;

  std::size_t size() const noexcept { return n + 1; }
};

[[nodiscard]] inline ExtremaAxis extrema_axis(std::size_t n, double lo = -1.0,
                                              double hi = 1.0) {
  if (n == 0) throw InvalidArgument("extrema_axis: n must be positive");
  if (!(hi > lo)) throw InvalidArgument("extrema_axis: empty interval");
  ExtremaAxis axis;
  axis.n = n;
  axis.lo = lo;
  axis.hi = hi;
  axis.nodes.resize(n + 1);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (std::size_t j = 0; j <= n; ++j) {
    const double s = -std::cos(std::numbers::pi * static_cast<double>(j) /
                               static_cast<double>(n));
    axis.nodes[j] = mid + half * s;
  }
  axis.nodes.front() = lo;
  axis.nodes.back() = hi;
  return axis;
}

using Axis = std::variant<RootsAxis, ExtremaAxis>;

inline std::size_t axis_size(const Axis& axis) {
  return std::visit([](const auto& a) { return a.size(); }, axis);
}

inline const std::vector<double>& axis_nodes(const Axis& axis) {
  return std::visit([](const auto& a) -> const std::vector<double>& { return a.nodes; },
                    axis);
}

/// Tensor product of one-dimensional Chebyshev axes. Flat indices are
/// row-major: the last axis varies fastest.
class TensorGrid {
 public:
  TensorGrid() = default;
  explicit TensorGrid(std::vector<Axis> axes) : axes_(std::move(axes)) {
    shape_.reserve(axes_.size());
    for (const auto& a : axes_) shape_.push_back(axis_size(a));
  }

  /// d-dimensional grid of m roots per axis.
  static TensorGrid roots(std::size_t dim, std::size_t m) {
    if (dim == 0) throw InvalidArgument("TensorGrid: dimension must be positive");
    std::vector<Axis> axes(dim, roots_axis(m));
    return TensorGrid(std::move(axes));
  }

  std::size_t dim() const noexcept { return axes_.size(); }
  const std::vector<Axis>& axes() const noexcept { return axes_; }
  const Axis& axis(std::size_t i) const { return axes_.at(i); }
  const std::vector<std::size_t>& shape() const noexcept { return shape_; }

  std::size_t size() const noexcept {
    std::size_t n = 1;
    for (auto s : shape_) n *= s;
    return n;
  }

  bool is_roots_axis(std::size_t i) const {
    return std::holds_alternative<RootsAxis>(axes_.at(i));
  }

  const RootsAxis& roots_axis_at(std::size_t i) const {
    const auto* a = std::get_if<RootsAxis>(&axes_.at(i));
    if (!a) throw InvalidArgument("TensorGrid: axis is not a roots axis");
    return *a;
  }

  std::vector<std::size_t> unflatten(std::size_t flat) const {
    std::vector<std::size_t> index(dim());
    for (std::size_t a = dim(); a-- > 0;) {
      index[a] = flat % shape_[a];
      flat /= shape_[a];
    }
    return index;
  }

  std::size_t flatten(const std::vector<std::size_t>& index) const {
    std::size_t flat = 0;
    for (std::size_t a = 0; a < dim(); ++a) flat = flat * shape_[a] + index[a];
    return flat;
  }

  std::vector<double> point(std::size_t flat) const {
    auto index = unflatten(flat);
    std::vector<double> x(dim());
    for (std::size_t a = 0; a < dim(); ++a) x[a] = axis_nodes(axes_[a])[index[a]];
    return x;
  }

  /// Distance in flat index between neighbours along an axis.
  std::size_t stride(std::size_t axis) const {
    std::size_t s = 1;
    for (std::size_t a = axis + 1; a < dim(); ++a) s *= shape_[a];
    return s;
  }

 private:
  std::vector<Axis> axes_;
  std::vector<std::size_t> shape_;
};

}  // namespace ssem
