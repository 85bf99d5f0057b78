#pragma once

#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "ssem/assembly/problem.hpp"
#include "ssem/error.hpp"
#include "ssem/geometry/domain.hpp"
#include "ssem/parabolic/parabolic.hpp"

namespace ssem::problems {

using Span = std::span<const double>;

/// An elliptic boundary value problem together with its exact solution.
struct EllipticProblem {
  std::string id;
  DomainSpec domain;
  EllipticOperatorSpec op;
  BoundaryConditionSpec bc;
  ScalarField exact;
  /// Pure Neumann data fixes u only up to an additive constant.
  bool up_to_constant = false;
};

/// -Laplace u = 0 on the disc, u = x^2 - y^2.
inline EllipticProblem dirichlet_disc() {
  const auto exact = [](Span x) { return x[0] * x[0] - x[1] * x[1]; };
  return {"dirichlet-disc", domains::omega1(), laplacian(2),
          dirichlet([exact](Span y, Span) { return exact(y); }), exact};
}

/// -[(2+y) u_xx + (2-x) u_yy] = -12(x+y) on the star with Neumann data;
/// u = x^3 + y^3.
inline EllipticProblem neumann_star() {
  EllipticOperatorSpec op(2);
  op.a[0][0] = [](Span x) { return 2.0 + x[1]; };
  op.a[1][1] = [](Span x) { return 2.0 - x[0]; };
  op.f = [](Span x) { return -12.0 * (x[0] + x[1]); };
  return {"neumann-star", domains::omega2(), std::move(op),
          neumann([](Span y, Span nu) { return 3 * y[0] * y[0] * nu[0] + 3 * y[1] * y[1] * nu[1]; }),
          [](Span x) { return x[0] * x[0] * x[0] + x[1] * x[1] * x[1]; }, true};
}

/// -Laplace u = -sinh x - cosh y on the star annulus, u + du/dnu = g;
/// u = sinh x + cosh y.
inline EllipticProblem robin_annulus() {
  const auto exact = [](Span x) { return std::sinh(x[0]) + std::cosh(x[1]); };
  const auto one = [](Span) { return 1.0; };
  return {"robin-annulus", domains::omega3(),
          laplacian(2, [exact](Span x) { return -exact(x); }),
          robin(one, one,
                [exact](Span y, Span nu) {
                  return exact(y) + std::cosh(y[0]) * nu[0] + std::sinh(y[1]) * nu[1];
                }),
          exact};
}

/// -Laplace u = -2y sin z + x^2 y sin z in 3D, u = x^2 y sin z.
inline EllipticProblem dirichlet_3d() {
  const auto exact = [](Span x) { return x[0] * x[0] * x[1] * std::sin(x[2]); };
  return {"dirichlet-3d", domains::omega4(),
          laplacian(3, [exact](Span x) { return -2.0 * x[1] * std::sin(x[2]) + exact(x); }),
          dirichlet([exact](Span y, Span) { return exact(y); }), exact};
}

/// e^{-t} j0(r) - e^{-t/4} j0(r/2).
inline double bessel_heat_solution(Span x, double t) {
  const double r = std::hypot(x[0], x[1]);
  return std::exp(-t) * bessel_j0(r) - std::exp(-t / 4.0) * bessel_j0(r / 2.0);
}

/// Heat equation on the star cylinder with the radial Bessel solution.
inline ParabolicProblem parabolic_star() {
  ParabolicProblem p;
  p.domain = domains::omega2();
  p.u0 = [](Span x) { return bessel_heat_solution(x, 0.0); };
  p.g = [](Span y, double t) { return bessel_heat_solution(y, t); };
  p.exact = [](Span x, double t) { return bessel_heat_solution(x, t); };
  return p;
}

inline const std::vector<std::string>& ids() {
  static const std::vector<std::string> all{"dirichlet-disc", "neumann-star", "robin-annulus", "dirichlet-3d",
                                            "parabolic-star"};
  return all;
}

inline bool is_known(const std::string& id) {
  for (const auto& s : ids())
    if (s == id) return true;
  return false;
}

inline bool is_parabolic(const std::string& id) { return id == "parabolic-star"; }

/// Dimension of the grid the smoother acts on (space-time counts time).
inline std::size_t grid_dim(const std::string& id) {
  if (id == "dirichlet-3d" || id == "parabolic-star") return 3;
  return 2;
}

inline EllipticProblem elliptic(const std::string& id) {
  if (id == "dirichlet-disc") return dirichlet_disc();
  if (id == "neumann-star") return neumann_star();
  if (id == "robin-annulus") return robin_annulus();
  if (id == "dirichlet-3d") return dirichlet_3d();
  throw InvalidArgument("unknown elliptic problem '" + id + "'");
}

}  // namespace ssem::problems
