#include <gtest/gtest.h>

#include <cmath>

#include "dense_oracle.hpp"
#include "ssem/assembly/constraints.hpp"
#include "ssem/assembly/smoother.hpp"
#include "test_helpers.hpp"

using namespace ssem;
using namespace ssem::testing;

namespace {

using Span = std::span<const double>;

GridFunction sample(const TensorGrid& grid, const std::function<double(Span)>& f) {
  GridFunction u(grid.shape());
  for (std::size_t i = 0; i < grid.size(); ++i) u[i] = f(grid.point(i));
  return u;
}

// Variable-coefficient operator with exact solution x^3 + y^3.
EllipticOperatorSpec star_operator() {
  EllipticOperatorSpec spec(2);
  spec.a[0][0] = [](Span x) { return 2.0 + x[1]; };
  spec.a[1][1] = [](Span x) { return 2.0 - x[0]; };
  spec.f = [](Span x) { return -12.0 * (x[0] + x[1]); };
  return spec;
}

// Everything at once, to exercise every term kind.
EllipticOperatorSpec full_operator(std::size_t d) {
  EllipticOperatorSpec spec(d);
  for (std::size_t i = 0; i < d; ++i) {
    spec.a[i][i] = [i](Span x) { return 1.5 + 0.2 * x[i]; };
    for (std::size_t j = i + 1; j < d; ++j) spec.a[i][j] = [](Span x) { return 0.1 * x[0]; };
    spec.b[i] = [i](Span x) { return 0.3 * x[i] - 0.1; };
  }
  spec.c = [](Span x) { return 1.0 + x[0] * x[0]; };
  return spec;
}

Eigen::VectorXd to_eigen(Span v) { return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())); }

BoundaryData poly_dirichlet() {
  return [](Span y, Span) { return y[0] * y[0] - y[1] * y[1]; };
}

}  // namespace

TEST(ApplyA, HarmonicPolynomialGivesZero) {
  const auto grid = TensorGrid::roots(2, 12);
  const auto interior = classify_interior(domains::omega1(), grid);
  const auto r = apply_A(sample(grid, [](Span x) { return x[0] * x[0] - x[1] * x[1]; }), grid, laplacian(2),
                         interior);
  EXPECT_LT(max_abs(r), 1e-10);
}

TEST(ApplyA, VariableCoefficientCubic) {
  const auto grid = TensorGrid::roots(2, 14);
  const auto interior = classify_interior(domains::omega2(), grid);
  const auto spec = star_operator();
  const auto r = apply_A(sample(grid, [](Span x) { return x[0] * x[0] * x[0] + x[1] * x[1] * x[1]; }), grid, spec,
                         interior);
  for (std::size_t i = 0; i < r.size(); ++i)
    EXPECT_NEAR(r[i], spec.f(grid.point(interior.indices[i])), 1e-9);
}

TEST(ApplyA, ZerothOrderIsRestriction) {
  const auto grid = TensorGrid::roots(2, 10);
  const auto interior = classify_interior(domains::omega1(), grid);
  EllipticOperatorSpec spec(2);
  spec.c = [](Span) { return 1.0; };
  GridFunction u(grid.shape(), random_vector(grid.size(), 3));
  const auto r = apply_A(u, grid, spec, interior);
  for (std::size_t i = 0; i < r.size(); ++i) EXPECT_EQ(r[i], u[interior.indices[i]]);
  const auto v = random_vector(interior.size(), 4);
  const auto ext = apply_A_transpose(v, grid, spec, interior);
  std::vector<double> expected(grid.size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) expected[interior.indices[i]] = v[i];
  EXPECT_EQ(ext.data(), expected);
}

TEST(ApplyA, AdjointIdentity) {
  for (std::size_t d : {2u, 3u}) {
    const auto grid = TensorGrid::roots(d, d == 2 ? 13 : 8);
    const auto interior = classify_interior(d == 2 ? domains::omega2() : domains::omega4(), grid);
    const auto spec = full_operator(d);
    GridFunction u(grid.shape(), random_vector(grid.size(), 11));
    const auto v = random_vector(interior.size(), 12);
    const double lhs = dot(apply_A(u, grid, spec, interior), v);
    const double rhs = dot(u.values(), apply_A_transpose(v, grid, spec, interior).values());
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::abs(lhs));
  }
}

TEST(ApplyA, MatchesVandermondeOracle) {
  const std::size_t m = 9;
  const auto grid = TensorGrid::roots(2, m);
  const auto interior = classify_interior(domains::omega1(), grid);
  const auto x = roots_nodes(m);
  const Eigen::MatrixXd lap = -(on_axis(oracle_d2(x), 0, 2) + on_axis(oracle_d2(x), 1, 2));
  Eigen::MatrixXd a(interior.size(), grid.size());
  for (std::size_t r = 0; r < interior.size(); ++r) a.row(static_cast<Eigen::Index>(r)) = lap.row(static_cast<Eigen::Index>(interior.indices[r]));
  GridFunction u(grid.shape(), random_vector(grid.size(), 5));
  const auto v = random_vector(interior.size(), 6);
  EXPECT_LT((to_eigen(apply_A(u, grid, laplacian(2), interior)) - a * to_eigen(u.values())).cwiseAbs().maxCoeff(),
            1e-10 * a.cwiseAbs().maxCoeff());
  EXPECT_LT((to_eigen(apply_A_transpose(v, grid, laplacian(2), interior).values()) - a.transpose() * to_eigen(v))
                .cwiseAbs()
                .maxCoeff(),
            1e-10 * a.cwiseAbs().maxCoeff());
}

TEST(BoundaryRow, Dirichlet) {
  const auto grid = TensorGrid::roots(2, 12);
  const auto axes = roots_axes(grid);
  const auto u = sample(grid, [](Span x) { return x[0] * x[0] - x[1] * x[1]; });
  const auto bc = dirichlet(poly_dirichlet());
  const auto pts = sample_boundary(domains::omega1(), 12);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& y = pts.points[i];
    EXPECT_NEAR(boundary_row(y, pts.normals[i], bc, axes).apply(u.values(), grid.shape()),
                y[0] * y[0] - y[1] * y[1], 1e-11);
  }
}

TEST(BoundaryRow, Neumann) {
  const auto grid = TensorGrid::roots(2, 14);
  const auto axes = roots_axes(grid);
  const auto u = sample(grid, [](Span x) { return x[0] * x[0] * x[0] + x[1] * x[1] * x[1]; });
  const auto bc = neumann({});
  const auto pts = sample_boundary(domains::omega2(), 14);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& y = pts.points[i];
    const auto& n = pts.normals[i];
    EXPECT_NEAR(boundary_row(y, n, bc, axes).apply(u.values(), grid.shape()),
                3 * y[0] * y[0] * n[0] + 3 * y[1] * y[1] * n[1], 1e-9);
  }
}

TEST(BoundaryRow, RobinOnConstant) {
  const auto grid = TensorGrid::roots(2, 10);
  const auto axes = roots_axes(grid);
  const auto one = [](Span) { return 1.0; };
  const auto bc = robin(one, one, {});
  GridFunction u(grid.shape(), std::vector<double>(grid.size(), 1.0));
  const auto pts = sample_boundary(domains::omega3(), 10);
  for (std::size_t i = 0; i < pts.size(); ++i)
    EXPECT_NEAR(boundary_row(pts.points[i], pts.normals[i], bc, axes).apply(u.values(), grid.shape()), 1.0, 1e-12);
  EXPECT_THROW(boundary_row(pts.points[0], pts.normals[0], BoundaryConditionSpec{}, axes), InvalidArgument);
}

TEST(BoundaryRow, MatchesVandermondeOracle) {
  const std::size_t m = 8;
  const auto grid = TensorGrid::roots(2, m);
  const auto x = roots_nodes(m);
  const std::vector<double> y{0.31, -0.47}, nu{0.6, 0.8};
  const auto bc = robin([](Span) { return 2.0; }, [](Span) { return 0.5; }, {});
  const auto row = boundary_row(y, nu, bc, roots_axes(grid)).dense(grid.shape());
  const auto i0 = oracle_eval_row(x, y[0], 0), i1 = oracle_eval_row(x, y[1], 0);
  const auto d0 = oracle_eval_row(x, y[0], 1), d1 = oracle_eval_row(x, y[1], 1);
  const Eigen::MatrixXd expect =
      2.0 * kron(i0, i1) + 0.5 * (nu[0] * kron(d0, i1) + nu[1] * kron(i0, d1));
  for (std::size_t j = 0; j < grid.size(); ++j) EXPECT_NEAR(row[j], expect(0, static_cast<Eigen::Index>(j)), 1e-12);
}

TEST(BuildRhs, Examples) {
  const auto grid = TensorGrid::roots(2, 10);
  const auto domain = domains::omega1();
  const auto interior = classify_interior(domain, grid);
  const auto boundary = sample_boundary(domain, 10);
  const auto b = build_rhs(grid, laplacian(2), dirichlet([](Span, Span) { return 1.0; }), interior, boundary);
  ASSERT_EQ(b.size(), 52u);
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(b[i], i < 40 ? 0.0 : 1.0);
  const auto c = build_rhs(grid, laplacian(2), dirichlet(poly_dirichlet()), interior, boundary);
  for (std::size_t i = 0; i < boundary.size(); ++i) {
    const auto& y = boundary.points[i];
    EXPECT_EQ(c[40 + i], y[0] * y[0] - y[1] * y[1]);
  }
}

TEST(ConstraintSystem, AdjointOnBuiltInProblems) {
  const auto g_zero = [](Span, Span) { return 0.0; };
  const auto one = [](Span) { return 1.0; };
  std::vector<ConstraintSystem> systems;
  systems.push_back(assemble_elliptic(domains::omega1(), 12, laplacian(2), dirichlet(g_zero)));
  systems.push_back(assemble_elliptic(domains::omega2(), 12, star_operator(), neumann(g_zero)));
  EllipticOperatorSpec helm(2);
  helm.a[0][0] = one;
  helm.a[1][1] = one;
  helm.c = one;
  systems.push_back(assemble_elliptic(domains::omega3(), 12, helm, robin(one, one, g_zero)));
  systems.push_back(assemble_elliptic(domains::omega4(), 10, laplacian(3), dirichlet(g_zero)));
  for (const auto& sys : systems) {
    const auto u = random_vector(sys.cols(), 21);
    const auto v = random_vector(sys.rows(), 22);
    const double lhs = dot(sys.apply(u), v);
    const double rhs = dot(u, sys.apply_transpose(v));
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::abs(lhs));
    // Rows extracted one by one agree with the operator form.
    const Eigen::MatrixXd c = sys.dense();
    EXPECT_LT((c * to_eigen(u) - to_eigen(sys.apply(u))).cwiseAbs().maxCoeff(), 1e-10 * c.cwiseAbs().maxCoeff());
  }
}

TEST(ConstraintSystem, PolynomialSolutionsSatisfyConstraints) {
  const auto domain2 = domains::omega2();
  const auto sys = assemble_elliptic(
      domain2, 14, star_operator(),
      neumann([](Span y, Span n) { return 3 * y[0] * y[0] * n[0] + 3 * y[1] * y[1] * n[1]; }));
  const auto u = sample(sys.grid, [](Span x) { return x[0] * x[0] * x[0] + x[1] * x[1] * x[1]; });
  const auto r = sys.apply(u.values());
  std::vector<double> res(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) res[i] = r[i] - sys.rhs[i];
  EXPECT_LE(max_abs(res), 1e-9 * max_abs(sys.rhs));

  const auto sys3 = assemble_elliptic(domains::omega4(), 10, laplacian(3),
                                      dirichlet([](Span y, Span) { return y[0] * y[0] - y[2] * y[2]; }));
  const auto u3 = sample(sys3.grid, [](Span x) { return x[0] * x[0] - x[2] * x[2]; });
  const auto r3 = sys3.apply(u3.values());
  for (std::size_t i = 0; i < r3.size(); ++i) res.push_back(r3[i] - sys3.rhs[i]);
  EXPECT_LE(max_abs(res), 1e-9 * max_abs(sys3.rhs));
}

TEST(Smoother, Examples) {
  const auto grid = TensorGrid::roots(2, 10);
  const Smoother s(grid, SmootherSpec::power(2));
  GridFunction one(grid.shape(), std::vector<double>(grid.size(), 1.0));
  EXPECT_LT(max_abs_diff(s.half_inverse(one).values(), one.values()), 1e-13);
  const auto t34 = sample(grid, [](Span x) { return chebyshev_t(3, x[0]) * chebyshev_t(4, x[1]); });
  const auto out = s.half_inverse(t34);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(out[i], t34[i] / 26.0, 1e-14);
  const Smoother e(grid, SmootherSpec::exponential());
  const auto oute = e.half_inverse(t34);
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_NEAR(oute[i], t34[i] * std::exp(-2.5), 1e-14);
  EXPECT_EQ(SmootherSpec::power(4).label(), "4");
  EXPECT_EQ(SmootherSpec::power(2.5).label(), "2.5");
  EXPECT_EQ(SmootherSpec::exponential().label(), "exp");
  EXPECT_THROW(SmootherSpec::power(-1), InvalidArgument);
}

TEST(Smoother, SymmetricOnRootsGrid) {
  for (std::size_t d : {1u, 2u, 3u}) {
    const auto grid = TensorGrid::roots(d, 9);
    for (const auto& spec : {SmootherSpec::power(3), SmootherSpec::exponential()}) {
      const Smoother s(grid, spec);
      GridFunction u(grid.shape(), random_vector(grid.size(), 31));
      GridFunction v(grid.shape(), random_vector(grid.size(), 32));
      const double a = dot(s.half_inverse(u).values(), v.values());
      const double b = dot(u.values(), s.half_inverse(v).values());
      EXPECT_NEAR(a, b, 1e-11 * std::max(1.0, std::abs(a)));
    }
  }
}

TEST(Smoother, ForwardIsInverse) {
  const auto grid = TensorGrid::roots(2, 11);
  const Smoother s(grid, SmootherSpec::power(6));
  GridFunction u(grid.shape(), random_vector(grid.size(), 33));
  EXPECT_LT(rel_diff(s.half_forward(s.half_inverse(u)).values(), u.values()), 1e-10);
}

TEST(Smoother, MatchesVandermondeOracle) {
  const std::size_t m = 7;
  const auto grid = TensorGrid::roots(2, m);
  const auto spec = SmootherSpec::power(4);
  const Eigen::MatrixXd dense = oracle_smoother(m, 2, [](const std::vector<std::size_t>& k) {
    return std::pow(1.0 + double(k[0] * k[0] + k[1] * k[1]), -2.0);
  });
  GridFunction u(grid.shape(), random_vector(grid.size(), 34));
  const auto got = apply_smoother_half_inverse(u, grid, spec);
  EXPECT_LT((to_eigen(got.values()) - dense * to_eigen(u.values())).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(MaterializeM, ShapeOnDisc) {
  const auto sys = assemble_elliptic(domains::omega1(), 10, laplacian(2), dirichlet(poly_dirichlet()));
  const auto m = materialize_M(sys, SmootherSpec::power(4));
  EXPECT_EQ(m.rows(), 100);
  EXPECT_EQ(m.cols(), 52);
}

TEST(MaterializeM, TransposeMatchesImplicitOperators) {
  const auto sys = assemble_elliptic(domains::omega2(), 12, star_operator(), neumann({}));
  const Smoother s(sys.grid, SmootherSpec::power(4));
  const auto m = materialize_M(sys, s);
  GridFunction u(sys.grid.shape(), random_vector(sys.cols(), 41));
  const Eigen::VectorXd lhs = m.transpose() * to_eigen(u.values());
  const auto rhs = sys.apply(s.half_inverse(u).values());
  EXPECT_LT((lhs - to_eigen(rhs)).cwiseAbs().maxCoeff(), 1e-10 * lhs.cwiseAbs().maxCoeff());
}

TEST(MaterializeM, SingleNodeConstraintIsIndicator) {
  const auto grid = TensorGrid::roots(2, 6);
  ConstraintSystem sys;
  sys.grid = grid;
  const auto node = grid.point(13);
  std::vector<SeparableRow> rows{bary_interp_row(roots_axes(grid), node)};
  sys.blocks.push_back(std::make_shared<SeparableRowBlock>(grid.shape(), rows));
  const auto m = materialize_M(sys, SmootherSpec::power(0));
  for (Eigen::Index i = 0; i < m.rows(); ++i) EXPECT_NEAR(m(i, 0), i == 13 ? 1.0 : 0.0, 1e-14);
}

TEST(MaterializeM, UnderResolvedIsAnError) {
  DomainSpec d = domains::box(2);
  d.curves = domains::disc(0.5).curves;
  const auto sys = assemble_elliptic(d, 6, laplacian(2), dirichlet({}));
  EXPECT_GT(sys.rows(), sys.cols());
  EXPECT_THROW(materialize_M(sys, SmootherSpec::power(2)), UnderResolved);
}

TEST(MaterializeM, ColumnsMatchDenseAssembly) {
  const std::size_t m = 11;
  const auto spec = full_operator(2);
  const auto one = [](Span) { return 1.0; };
  const auto sys = assemble_elliptic(domains::omega2(), m, spec, robin(one, one, {}));
  const auto mat = materialize_M(sys, SmootherSpec::power(4));

  const auto x = roots_nodes(m);
  const Eigen::MatrixXd d1 = oracle_d1(x), d2 = oracle_d2(x);
  const Eigen::MatrixXd smoother = oracle_smoother(m, 2, [](const std::vector<std::size_t>& k) {
    return std::pow(1.0 + double(k[0] * k[0] + k[1] * k[1]), -2.0);
  });
  const auto oracle_column = [&](std::size_t i) -> Eigen::VectorXd {
    Eigen::RowVectorXd row(m * m);
    if (i < sys.interior.size()) {
      const auto flat = static_cast<Eigen::Index>(sys.interior.indices[i]);
      const auto p = sys.grid.point(sys.interior.indices[i]);
      const Eigen::MatrixXd dxx = on_axis(d2, 0, 2), dyy = on_axis(d2, 1, 2);
      const Eigen::MatrixXd dx = on_axis(d1, 0, 2), dy = on_axis(d1, 1, 2);
      row = -spec.a[0][0](p) * dxx.row(flat) - spec.a[1][1](p) * dyy.row(flat) -
            2 * spec.a[0][1](p) * (dx * dy).row(flat) + spec.b[0](p) * dx.row(flat) + spec.b[1](p) * dy.row(flat);
      row(flat) += spec.c(p);
    } else {
      const auto& y = sys.boundary.points[i - sys.interior.size()];
      const auto& nu = sys.boundary.normals[i - sys.interior.size()];
      const auto i0 = oracle_eval_row(x, y[0], 0), i1 = oracle_eval_row(x, y[1], 0);
      const auto e0 = oracle_eval_row(x, y[0], 1), e1 = oracle_eval_row(x, y[1], 1);
      row = kron(i0, i1) + nu[0] * kron(e0, i1) + nu[1] * kron(i0, e1);
    }
    return smoother * row.transpose();
  };
  const std::vector<std::size_t> picks{0, 7, sys.interior.size() - 1, sys.interior.size(), sys.rows() - 1};
  for (auto i : picks) {
    const Eigen::VectorXd expect = oracle_column(i);
    const Eigen::VectorXd got = mat.col(static_cast<Eigen::Index>(i));
    EXPECT_LT((got - expect).cwiseAbs().maxCoeff(), 1e-10 * expect.cwiseAbs().maxCoeff()) << "column " << i;
  }
}
