#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "ssem/spectral/axis.hpp"
#include "ssem/spectral/differentiation.hpp"
#include "ssem/spectral/tensor.hpp"

namespace ssem {

/// Distance below which an evaluation point is treated as a grid node.
inline constexpr double node_coincidence_tol = 1e-14;

/// A linear functional on grid functions written as a sum of rank-one
/// tensors: sum_t coef_t * (f_t^0 x f_t^1 x ... ).
struct SeparableRow {
  struct Term {
    double coef = 1.0;
    std::vector<std::vector<double>> factors;
  };
  std::vector<Term> terms;

  /// Appends one more axis factor to every term.
  void extend(const std::vector<double>& factor) {
    for (auto& t : terms) t.factors.push_back(factor);
  }

  void scale(double s) {
    for (auto& t : terms) t.coef *= s;
  }

  void append(const SeparableRow& other) {
    terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  }

  /// Adds `s` times this row, as a dense tensor, into `out`.
  void accumulate(std::span<double> out, const Shape& shape, double s = 1.0) const {
    const std::size_t d = shape.size();
    std::vector<std::size_t> index(d, 0);
    for (const auto& t : terms) {
      if (t.factors.size() != d) throw InvalidArgument("SeparableRow: rank mismatch");
      if (t.coef == 0.0) continue;
      std::fill(index.begin(), index.end(), 0);
      for (std::size_t flat = 0; flat < out.size(); ++flat) {
        double v = s * t.coef;
        for (std::size_t a = 0; a < d && v != 0.0; ++a) v *= t.factors[a][index[a]];
        out[flat] += v;
        for (std::size_t a = d; a-- > 0;) {
          if (++index[a] < shape[a]) break;
          index[a] = 0;
        }
      }
    }
  }

  [[nodiscard]] std::vector<double> dense(const Shape& shape) const {
    std::vector<double> out(shape_size(shape), 0.0);
    accumulate(out, shape);
    return out;
  }

  /// Contracts the row with a grid function, one axis at a time.
  [[nodiscard]] double apply(std::span<const double> u, const Shape& shape) const {
    const std::size_t d = shape.size();
    double total = 0.0;
    std::vector<double> work, next;
    for (const auto& t : terms) {
      if (t.factors.size() != d) throw InvalidArgument("SeparableRow: rank mismatch");
      if (t.coef == 0.0) continue;
      work.assign(u.begin(), u.end());
      std::size_t remaining = work.size();
      // Contract the last axis repeatedly.
      for (std::size_t a = d; a-- > 0;) {
        const std::size_t len = shape[a];
        const std::size_t outer = remaining / len;
        next.assign(outer, 0.0);
        const auto& f = t.factors[a];
        for (std::size_t o = 0; o < outer; ++o) {
          double s = 0.0;
          for (std::size_t k = 0; k < len; ++k) s += f[k] * work[o * len + k];
          next[o] = s;
        }
        std::swap(work, next);
        remaining = outer;
      }
      total += t.coef * work[0];
    }
    return total;
  }
};

/// w_k = (-1)^k sin(theta_k) for the roots axis.
[[nodiscard]] inline std::vector<double> barycentric_weights(const RootsAxis& axis) {
  std::vector<double> w(axis.m);
  for (std::size_t k = 0; k < axis.m; ++k)
    w[k] = ((k % 2) ? -1.0 : 1.0) * std::sin(axis.angles[k]);
  return w;
}

namespace detail {

inline std::ptrdiff_t coincident_node(const RootsAxis& axis, double y) {
  for (std::size_t k = 0; k < axis.m; ++k)
    if (std::abs(y - axis.nodes[k]) <= node_coincidence_tol) return static_cast<std::ptrdiff_t>(k);
  return -1;
}

}  // namespace detail

/// Row that evaluates the degree-(m-1) interpolant at y.
[[nodiscard]] inline std::vector<double> interp_weights_1d(const RootsAxis& axis, double y) {
  std::vector<double> row(axis.m, 0.0);
  if (auto k = detail::coincident_node(axis, y); k >= 0) {
    row[static_cast<std::size_t>(k)] = 1.0;
    return row;
  }
  const auto w = barycentric_weights(axis);
  double denom = 0.0;
  for (std::size_t i = 0; i < axis.m; ++i) {
    row[i] = w[i] / (y - axis.nodes[i]);
    denom += row[i];
  }
  for (auto& r : row) r /= denom;
  return row;
}

/// Row that evaluates the derivative of the interpolant at y.
[[nodiscard]] inline std::vector<double> deriv_weights_1d(const RootsAxis& axis, double y) {
  std::vector<double> row(axis.m, 0.0);
  if (auto k = detail::coincident_node(axis, y); k >= 0) {
    // Limit y -> x_k: row k of the differentiation matrix.
    std::vector<double> e(axis.m, 0.0), col(axis.m);
    for (std::size_t j = 0; j < axis.m; ++j) {
      e[j] = 1.0;
      diff1_line(axis, e, col);
      row[j] = col[static_cast<std::size_t>(k)];
      e[j] = 0.0;
    }
    return row;
  }
  const auto w = barycentric_weights(axis);
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < axis.m; ++i) {
    const double r = 1.0 / (y - axis.nodes[i]);
    s1 += w[i] * r;
    s2 += w[i] * r * r;
  }
  for (std::size_t i = 0; i < axis.m; ++i) {
    const double r = 1.0 / (y - axis.nodes[i]);
    row[i] = -w[i] * r * r / s1 + (s2 / (s1 * s1)) * w[i] * r;
  }
  return row;
}

/// Tensor interpolation row delta_y over the given roots axes.
[[nodiscard]] inline SeparableRow bary_interp_row(const std::vector<RootsAxis>& axes,
                                                  std::span<const double> y) {
  if (y.size() != axes.size()) throw InvalidArgument("bary_interp_row: dimension mismatch");
  SeparableRow row;
  SeparableRow::Term t;
  for (std::size_t a = 0; a < axes.size(); ++a) t.factors.push_back(interp_weights_1d(axes[a], y[a]));
  row.terms.push_back(std::move(t));
  return row;
}

/// Directional-derivative row (delta_y o grad) . direction.
[[nodiscard]] inline SeparableRow bary_deriv_row(const std::vector<RootsAxis>& axes,
                                                 std::span<const double> y,
                                                 std::span<const double> direction) {
  const std::size_t d = axes.size();
  if (y.size() != d || direction.size() != d)
    throw InvalidArgument("bary_deriv_row: dimension mismatch");
  std::vector<std::vector<double>> interp(d), deriv(d);
  for (std::size_t a = 0; a < d; ++a) {
    interp[a] = interp_weights_1d(axes[a], y[a]);
    deriv[a] = deriv_weights_1d(axes[a], y[a]);
  }
  SeparableRow row;
  for (std::size_t a = 0; a < d; ++a) {
    if (direction[a] == 0.0) continue;
    SeparableRow::Term t;
    t.coef = direction[a];
    for (std::size_t b = 0; b < d; ++b) t.factors.push_back(b == a ? deriv[b] : interp[b]);
    row.terms.push_back(std::move(t));
  }
  return row;
}

/// Roots axes of a grid, in order; throws if any axis is not a roots axis.
[[nodiscard]] inline std::vector<RootsAxis> roots_axes(const TensorGrid& grid) {
  std::vector<RootsAxis> axes;
  for (std::size_t a = 0; a < grid.dim(); ++a) axes.push_back(grid.roots_axis_at(a));
  return axes;
}

}  // namespace ssem
