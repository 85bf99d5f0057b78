#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ssem/error.hpp"

namespace ssem {

/// Scalar field on the box. An empty function stands for the zero field.
using ScalarField = std::function<double(std::span<const double>)>;

/// Boundary data may depend on the outward normal as well as the point.
using BoundaryData = std::function<double(std::span<const double> y, std::span<const double> nu)>;

/// A u = -a_ij u_{x_i x_j} + b_i u_{x_i} + c u, summed over i, j, with source f.
/// Only a[i][j] for i <= j is read; the operator assumes a_ij = a_ji.
struct EllipticOperatorSpec {
  std::size_t dim = 2;
  std::vector<std::vector<ScalarField>> a;
  std::vector<ScalarField> b;
  ScalarField c;
  ScalarField f;

  explicit EllipticOperatorSpec(std::size_t d = 2)
      : dim(d), a(d, std::vector<ScalarField>(d)), b(d) {}
};

/// -Laplacian with source f.
[[nodiscard]] inline EllipticOperatorSpec laplacian(std::size_t dim, ScalarField f = {}) {
  EllipticOperatorSpec spec(dim);
  for (std::size_t i = 0; i < dim; ++i) spec.a[i][i] = [](std::span<const double>) { return 1.0; };
  spec.f = std::move(f);
  return spec;
}

/// B u = a u + b (grad u . nu) on the boundary, with data g.
struct BoundaryConditionSpec {
  ScalarField a;
  ScalarField b;
  BoundaryData g;
};

inline double eval_or_zero(const ScalarField& f, std::span<const double> x) {
  return f ? f(x) : 0.0;
}

[[nodiscard]] inline BoundaryConditionSpec dirichlet(BoundaryData g) {
  return {[](std::span<const double>) { return 1.0; }, {}, std::move(g)};
}

[[nodiscard]] inline BoundaryConditionSpec neumann(BoundaryData g) {
  return {{}, [](std::span<const double>) { return 1.0; }, std::move(g)};
}

[[nodiscard]] inline BoundaryConditionSpec robin(ScalarField a, ScalarField b, BoundaryData g) {
  return {std::move(a), std::move(b), std::move(g)};
}

}  // namespace ssem
