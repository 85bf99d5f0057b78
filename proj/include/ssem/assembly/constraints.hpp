#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "ssem/assembly/problem.hpp"
#include "ssem/error.hpp"
#include "ssem/geometry/sampling.hpp"
#include "ssem/spectral/axis.hpp"
#include "ssem/spectral/barycentric.hpp"
#include "ssem/spectral/differentiation.hpp"
#include "ssem/spectral/tensor.hpp"

namespace ssem {

/// A group of consecutive rows of C. Grid functions are flat row-major spans.
class ConstraintBlock {
 public:
  virtual ~ConstraintBlock() = default;
  virtual std::size_t size() const = 0;
  /// out[r] = (C_block u)_r for every row r of the block.
  virtual void apply(std::span<const double> u, std::span<double> out) const = 0;
  /// out += C_block^T v.
  virtual void apply_transpose(std::span<const double> v, std::span<double> out) const = 0;
  /// out += s * (row r of the block).
  virtual void add_row_to(std::size_t r, std::span<double> out, double s) const = 0;
};

/// Rows sum_t coef_t[r] * (P_t u)[indices[r]], where each P_t is a product of
/// one-dimensional matrices acting on distinct axes.
class RestrictedOperatorBlock final : public ConstraintBlock {
 public:
  struct Factor {
    std::size_t axis;
    std::shared_ptr<const Eigen::MatrixXd> matrix;
  };
  struct Term {
    std::vector<double> coef;
    std::vector<Factor> factors;
  };

  RestrictedOperatorBlock(Shape shape, std::vector<std::size_t> indices)
      : shape_(std::move(shape)), indices_(std::move(indices)) {}

  void add_term(std::vector<double> coef, std::vector<Factor> factors) {
    if (coef.size() != indices_.size()) throw InvalidArgument("RestrictedOperatorBlock: coefficient count");
    for (std::size_t i = 0; i < factors.size(); ++i)
      for (std::size_t j = i + 1; j < factors.size(); ++j)
        if (factors[i].axis == factors[j].axis)
          throw InvalidArgument("RestrictedOperatorBlock: repeated axis in one term");
    terms_.push_back({std::move(coef), std::move(factors)});
  }

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t size() const override { return indices_.size(); }

  void apply(std::span<const double> u, std::span<double> out) const override {
    std::fill(out.begin(), out.end(), 0.0);
    std::vector<double> w, tmp(u.size());
    for (const auto& t : terms_) {
      w.assign(u.begin(), u.end());
      for (const auto& f : t.factors) {
        apply_axis_matrix(w, tmp, shape_, f.axis, *f.matrix);
        std::swap(w, tmp);
      }
      for (std::size_t r = 0; r < indices_.size(); ++r) out[r] += t.coef[r] * w[indices_[r]];
    }
  }

  void apply_transpose(std::span<const double> v, std::span<double> out) const override {
    std::vector<double> w(out.size()), tmp(out.size());
    for (const auto& t : terms_) {
      std::fill(w.begin(), w.end(), 0.0);
      for (std::size_t r = 0; r < indices_.size(); ++r) w[indices_[r]] = t.coef[r] * v[r];
      for (auto f = t.factors.rbegin(); f != t.factors.rend(); ++f) {
        apply_axis_matrix(w, tmp, shape_, f->axis, *f->matrix, /*transpose=*/true);
        std::swap(w, tmp);
      }
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += w[i];
    }
  }

  void add_row_to(std::size_t r, std::span<double> out, double s) const override {
    row(r).accumulate(out, shape_, s);
  }

  /// Row r as a separable functional.
  [[nodiscard]] SeparableRow row(std::size_t r) const {
    const std::size_t d = shape_.size();
    std::vector<std::size_t> idx(d);
    std::size_t flat = indices_.at(r);
    for (std::size_t a = d; a-- > 0;) {
      idx[a] = flat % shape_[a];
      flat /= shape_[a];
    }
    SeparableRow out;
    for (const auto& t : terms_) {
      SeparableRow::Term term;
      term.coef = t.coef[r];
      for (std::size_t a = 0; a < d; ++a) {
        std::vector<double> f(shape_[a], 0.0);
        f[idx[a]] = 1.0;
        for (const auto& fac : t.factors)
          if (fac.axis == a)
            for (std::size_t k = 0; k < shape_[a]; ++k) f[k] = (*fac.matrix)(idx[a], static_cast<Eigen::Index>(k));
        term.factors.push_back(std::move(f));
      }
      out.terms.push_back(std::move(term));
    }
    return out;
  }

 private:
  Shape shape_;
  std::vector<std::size_t> indices_;
  std::vector<Term> terms_;
};

/// Rows given explicitly as separable functionals (boundary traces).
class SeparableRowBlock final : public ConstraintBlock {
 public:
  SeparableRowBlock(Shape shape, std::vector<SeparableRow> rows)
      : shape_(std::move(shape)), rows_(std::move(rows)) {}

  std::size_t size() const override { return rows_.size(); }
  const std::vector<SeparableRow>& rows() const noexcept { return rows_; }

  void apply(std::span<const double> u, std::span<double> out) const override {
    for (std::size_t r = 0; r < rows_.size(); ++r) out[r] = rows_[r].apply(u, shape_);
  }

  void apply_transpose(std::span<const double> v, std::span<double> out) const override {
    for (std::size_t r = 0; r < rows_.size(); ++r)
      if (v[r] != 0.0) rows_[r].accumulate(out, shape_, v[r]);
  }

  void add_row_to(std::size_t r, std::span<double> out, double s) const override {
    rows_.at(r).accumulate(out, shape_, s);
  }

 private:
  Shape shape_;
  std::vector<SeparableRow> rows_;
};

/// C = [A; B] stacked block by block, with right-hand side b.
struct ConstraintSystem {
  TensorGrid grid;
  InteriorIndexSet interior;
  BoundaryPointSet boundary;
  std::vector<std::shared_ptr<const ConstraintBlock>> blocks;
  std::vector<double> rhs;
  /// Counts reported alongside a solve (interior and boundary constraints).
  std::size_t n_omega = 0;
  std::size_t n_gamma = 0;

  std::size_t rows() const {
    std::size_t n = 0;
    for (const auto& b : blocks) n += b->size();
    return n;
  }
  std::size_t cols() const { return grid.size(); }

  [[nodiscard]] std::vector<double> apply(std::span<const double> u) const {
    if (u.size() != cols()) throw InvalidArgument("ConstraintSystem::apply: size mismatch");
    std::vector<double> out(rows());
    std::size_t offset = 0;
    for (const auto& b : blocks) {
      b->apply(u, std::span<double>(out).subspan(offset, b->size()));
      offset += b->size();
    }
    return out;
  }

  [[nodiscard]] std::vector<double> apply_transpose(std::span<const double> v) const {
    if (v.size() != rows()) throw InvalidArgument("ConstraintSystem::apply_transpose: size mismatch");
    std::vector<double> out(cols(), 0.0);
    std::size_t offset = 0;
    for (const auto& b : blocks) {
      b->apply_transpose(v.subspan(offset, b->size()), out);
      offset += b->size();
    }
    return out;
  }

  /// C^T e_i, i.e. row i of C as a grid function.
  [[nodiscard]] std::vector<double> row(std::size_t i) const {
    std::vector<double> out(cols(), 0.0);
    for (const auto& b : blocks) {
      if (i < b->size()) {
        b->add_row_to(i, out, 1.0);
        return out;
      }
      i -= b->size();
    }
    throw InvalidArgument("ConstraintSystem::row: index out of range");
  }

  /// Dense C, for tests and small problems.
  [[nodiscard]] Eigen::MatrixXd dense() const {
    Eigen::MatrixXd c(rows(), cols());
    for (std::size_t i = 0; i < rows(); ++i) {
      const auto r = row(i);
      for (std::size_t j = 0; j < cols(); ++j) c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r[j];
    }
    return c;
  }
};

/// The interior block of A for an elliptic operator on a roots grid.
[[nodiscard]] inline std::shared_ptr<RestrictedOperatorBlock> elliptic_block(
    const TensorGrid& grid, const EllipticOperatorSpec& spec, const InteriorIndexSet& interior) {
  const std::size_t d = grid.dim();
  if (spec.dim != d) throw InvalidArgument("elliptic_block: operator and grid dimensions differ");
  std::vector<std::shared_ptr<const Eigen::MatrixXd>> d1(d), d2(d);
  for (std::size_t a = 0; a < d; ++a) {
    auto m = differentiation_matrices(grid.roots_axis_at(a));
    d1[a] = std::make_shared<const Eigen::MatrixXd>(std::move(m.first));
    d2[a] = std::make_shared<const Eigen::MatrixXd>(std::move(m.second));
  }
  std::vector<std::vector<double>> points;
  points.reserve(interior.size());
  for (auto flat : interior.indices) points.push_back(grid.point(flat));
  const auto sample = [&](const ScalarField& f, double scale) {
    std::vector<double> v(points.size());
    for (std::size_t r = 0; r < points.size(); ++r) v[r] = scale * f(points[r]);
    return v;
  };
  auto block = std::make_shared<RestrictedOperatorBlock>(grid.shape(), interior.indices);
  for (std::size_t i = 0; i < d; ++i) {
    if (spec.a[i][i]) block->add_term(sample(spec.a[i][i], -1.0), {{i, d2[i]}});
    for (std::size_t j = i + 1; j < d; ++j)
      if (spec.a[i][j]) block->add_term(sample(spec.a[i][j], -2.0), {{i, d1[i]}, {j, d1[j]}});
  }
  for (std::size_t i = 0; i < d; ++i)
    if (spec.b[i]) block->add_term(sample(spec.b[i], 1.0), {{i, d1[i]}});
  if (spec.c) block->add_term(sample(spec.c, 1.0), {});
  return block;
}

/// A u at the interior nodes.
[[nodiscard]] inline std::vector<double> apply_A(const GridFunction& u, const TensorGrid& grid,
                                                 const EllipticOperatorSpec& spec,
                                                 const InteriorIndexSet& interior) {
  if (u.shape() != grid.shape()) throw InvalidArgument("apply_A: shape mismatch");
  const auto block = elliptic_block(grid, spec, interior);
  std::vector<double> out(block->size());
  block->apply(u.values(), out);
  return out;
}

/// A^T v: extension by zero followed by the transposed derivative operators.
[[nodiscard]] inline GridFunction apply_A_transpose(std::span<const double> v, const TensorGrid& grid,
                                                    const EllipticOperatorSpec& spec,
                                                    const InteriorIndexSet& interior) {
  if (v.size() != interior.size()) throw InvalidArgument("apply_A_transpose: size mismatch");
  const auto block = elliptic_block(grid, spec, interior);
  GridFunction out(grid.shape());
  block->apply_transpose(v, out.values());
  return out;
}

/// a(y) delta_y + b(y) (delta_y o grad) . nu.
[[nodiscard]] inline SeparableRow boundary_row(std::span<const double> y, std::span<const double> nu,
                                               const BoundaryConditionSpec& bc,
                                               const std::vector<RootsAxis>& axes) {
  const double a = eval_or_zero(bc.a, y);
  const double b = eval_or_zero(bc.b, y);
  if (a == 0.0 && b == 0.0) throw InvalidArgument("boundary_row: a and b both vanish");
  SeparableRow row;
  if (a != 0.0) {
    row = bary_interp_row(axes, y);
    row.scale(a);
  }
  if (b != 0.0) {
    auto deriv = bary_deriv_row(axes, y, nu);
    deriv.scale(b);
    row.append(deriv);
  }
  return row;
}

/// b = (f on the interior nodes; g on the boundary points).
[[nodiscard]] inline std::vector<double> build_rhs(const TensorGrid& grid, const EllipticOperatorSpec& spec,
                                                   const BoundaryConditionSpec& bc,
                                                   const InteriorIndexSet& interior,
                                                   const BoundaryPointSet& boundary) {
  std::vector<double> b;
  b.reserve(interior.size() + boundary.size());
  for (auto flat : interior.indices) b.push_back(eval_or_zero(spec.f, grid.point(flat)));
  for (std::size_t i = 0; i < boundary.size(); ++i)
    b.push_back(bc.g ? bc.g(boundary.points[i], boundary.normals[i]) : 0.0);
  return b;
}

/// Full constraint system of an elliptic boundary value problem on the
/// m^d roots grid.
[[nodiscard]] inline ConstraintSystem assemble_elliptic(const DomainSpec& domain, std::size_t m,
                                                        const EllipticOperatorSpec& spec,
                                                        const BoundaryConditionSpec& bc) {
  ConstraintSystem sys;
  sys.grid = TensorGrid::roots(domain.dim, m);
  sys.interior = classify_interior(domain, sys.grid);
  sys.boundary = sample_boundary(domain, m);
  const auto axes = roots_axes(sys.grid);
  std::vector<SeparableRow> rows;
  rows.reserve(sys.boundary.size());
  for (std::size_t i = 0; i < sys.boundary.size(); ++i)
    rows.push_back(boundary_row(sys.boundary.points[i], sys.boundary.normals[i], bc, axes));
  sys.blocks.push_back(elliptic_block(sys.grid, spec, sys.interior));
  sys.blocks.push_back(std::make_shared<SeparableRowBlock>(sys.grid.shape(), std::move(rows)));
  sys.rhs = build_rhs(sys.grid, spec, bc, sys.interior, sys.boundary);
  sys.n_omega = sys.interior.size();
  sys.n_gamma = sys.boundary.size();
  return sys;
}

}  // namespace ssem
