#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include "ssem/assembly/constraints.hpp"
#include "ssem/error.hpp"
#include "ssem/spectral/multiplier.hpp"
#include "ssem/spectral/transform.hpp"

namespace ssem {

enum class SmootherKind { power, exponential };

/// Power: mu(k) = (1 + |k|^2)^(-p/2). Exponential: mu(k) = exp(-|k|/2).
/// |k| is the Euclidean norm of the integer frequency vector; p = 0 gives
/// the identity.
struct SmootherSpec {
  SmootherKind kind = SmootherKind::power;
  double p = 4.0;

  static SmootherSpec power(double p) {
    if (!(p >= 0.0)) throw InvalidArgument("SmootherSpec: p must be non-negative");
    return {SmootherKind::power, p};
  }
  static SmootherSpec exponential() { return {SmootherKind::exponential, 0.0}; }

  double multiplier(std::span<const std::size_t> k) const {
    double k2 = 0.0;
    for (auto v : k) k2 += static_cast<double>(v) * static_cast<double>(v);
    if (kind == SmootherKind::exponential) return std::exp(-0.5 * std::sqrt(k2));
    return std::pow(1.0 + k2, -0.5 * p);
  }

  /// "exp", or p written without trailing zeros.
  std::string label() const {
    if (kind == SmootherKind::exponential) return "exp";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", p);
    return buf;
  }
};

/// S^{-1/2} = C^{-1} M[mu] C on a tensor grid, with mu pre-sampled.
class Smoother {
 public:
  Smoother(const TensorGrid& grid, const SmootherSpec& spec)
      : grid_(grid), spec_(spec),
        mu_(sample_multiplier(grid, [&spec](std::span<const std::size_t> k) { return spec.multiplier(k); })) {
    inv_mu_.resize(mu_.size());
    for (std::size_t i = 0; i < mu_.size(); ++i) inv_mu_[i] = 1.0 / mu_[i];
    for (std::size_t a = 0; a < grid.dim(); ++a) symmetric_ = symmetric_ && grid.is_roots_axis(a);
    if (!symmetric_) build_axis_matrices();
  }

  const SmootherSpec& spec() const noexcept { return spec_; }
  const TensorGrid& grid() const noexcept { return grid_; }
  std::span<const double> multipliers() const noexcept { return mu_; }

  [[nodiscard]] GridFunction half_inverse(const GridFunction& u) const {
    return apply_multiplier(u, grid_, std::span<const double>(mu_));
  }

  /// (S^{-1/2})^T. Equal to half_inverse on pure roots grids; an extrema
  /// axis breaks the symmetry.
  [[nodiscard]] GridFunction half_inverse_transpose(const GridFunction& u) const {
    if (symmetric_) return half_inverse(u);
    if (u.shape() != grid_.shape()) throw InvalidArgument("Smoother: shape mismatch");
    const Shape& shape = grid_.shape();
    std::vector<double> w(u.data()), tmp(w.size());
    for (std::size_t a = 0; a < shape.size(); ++a) {
      apply_axis_matrix(w, tmp, shape, a, inverse_[a], /*transpose=*/true);
      std::swap(w, tmp);
    }
    for (std::size_t i = 0; i < w.size(); ++i) w[i] *= mu_[i];
    for (std::size_t a = 0; a < shape.size(); ++a) {
      apply_axis_matrix(w, tmp, shape, a, forward_[a], /*transpose=*/true);
      std::swap(w, tmp);
    }
    return GridFunction(shape, std::move(w));
  }

  bool symmetric() const noexcept { return symmetric_; }

  /// S^{+1/2}, the inverse of half_inverse.
  [[nodiscard]] GridFunction half_forward(const GridFunction& u) const {
    return apply_multiplier(u, grid_, std::span<const double>(inv_mu_));
  }

 private:
  // Dense one-dimensional forward / inverse Chebyshev transforms per axis.
  void build_axis_matrices() {
    for (std::size_t a = 0; a < grid_.dim(); ++a) {
      const std::size_t n = grid_.shape()[a];
      const bool roots = grid_.is_roots_axis(a);
      Eigen::MatrixXd f(n, n), g(n, n);
      std::vector<double> e(n, 0.0), col(n);
      for (std::size_t j = 0; j < n; ++j) {
        e[j] = 1.0;
        if (roots) cheb_forward_roots(e, col); else cheb_forward_extrema(e, col);
        for (std::size_t i = 0; i < n; ++i) f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
        if (roots) cheb_inverse_roots(e, col); else cheb_inverse_extrema(e, col);
        for (std::size_t i = 0; i < n; ++i) g(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = col[i];
        e[j] = 0.0;
      }
      forward_.push_back(std::move(f));
      inverse_.push_back(std::move(g));
    }
  }

  TensorGrid grid_;
  SmootherSpec spec_;
  bool symmetric_ = true;
  std::vector<Eigen::MatrixXd> forward_;
  std::vector<Eigen::MatrixXd> inverse_;
  std::vector<double> mu_;
  std::vector<double> inv_mu_;
};

[[nodiscard]] inline GridFunction apply_smoother_half_inverse(const GridFunction& u, const TensorGrid& grid,
                                                              const SmootherSpec& spec) {
  return Smoother(grid, spec).half_inverse(u);
}

/// M = (C S^{-1/2})^T = (S^{-1/2})^T C^T, one column per constraint.
[[nodiscard]] inline Eigen::MatrixXd materialize_M(const ConstraintSystem& system, const Smoother& smoother) {
  const std::size_t rows = system.cols();
  const std::size_t cols = system.rows();
  if (rows < cols)
    throw UnderResolved("materialize_M: " + std::to_string(cols) + " constraints exceed " +
                        std::to_string(rows) + " grid unknowns");
  Eigen::MatrixXd m(rows, cols);
  const Shape& shape = system.grid.shape();
  for (std::size_t i = 0; i < cols; ++i) {
    GridFunction col(shape, system.row(i));
    const auto s = smoother.half_inverse_transpose(col);
    m.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::VectorXd>(s.data().data(), static_cast<Eigen::Index>(rows));
  }
  return m;
}

[[nodiscard]] inline Eigen::MatrixXd materialize_M(const ConstraintSystem& system, const SmootherSpec& spec) {
  return materialize_M(system, Smoother(system.grid, spec));
}

}  // namespace ssem
