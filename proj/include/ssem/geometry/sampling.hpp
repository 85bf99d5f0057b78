#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include "ssem/error.hpp"
#include "ssem/geometry/domain.hpp"
#include "ssem/spectral/axis.hpp"

namespace ssem {

/// Grid nodes closer than this to the boundary (|phi| <= tol) count as outside.
inline constexpr double inside_tol = 1e-12;

/// Omega^m: flat indices of grid nodes strictly inside the domain, ascending.
struct InteriorIndexSet {
  std::vector<std::size_t> indices;
  std::size_t size() const noexcept { return indices.size(); }
};

[[nodiscard]] inline InteriorIndexSet classify_interior(const DomainSpec& domain,
                                                        const TensorGrid& grid) {
  if (domain.dim != grid.dim())
    throw InvalidArgument("classify_interior: domain and grid dimensions differ");
  InteriorIndexSet set;
  for (std::size_t flat = 0; flat < grid.size(); ++flat) {
    const auto x = grid.point(flat);
    if (domain.inside(x, inside_tol)) set.indices.push_back(flat);
  }
  if (set.indices.empty())
    throw EmptyDomain("classify_interior: no grid node lies inside " + domain.name);
  return set;
}

/// Gamma^m: points on the boundary with outward unit normals.
struct BoundaryPointSet {
  std::vector<Point> points;
  std::vector<Point> normals;
  std::size_t size() const noexcept { return points.size(); }

  void append(const BoundaryPointSet& other) {
    points.insert(points.end(), other.points.begin(), other.points.end());
    normals.insert(normals.end(), other.normals.begin(), other.normals.end());
  }
};

namespace detail {

inline Point arccos_map(const Point& p) {
  Point q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[i] = std::acos(p[i]);
  return q;
}

inline double distance(const Point& a, const Point& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// Cumulative polyline length of the arccos-mapped curve at z_i = 2 pi i / n.
inline std::vector<double> mapped_cumulative_length(const BoundaryCurve& curve, std::size_t n) {
  std::vector<double> cum(n + 1, 0.0);
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  Point prev = arccos_map(curve.param(0.0));
  for (std::size_t i = 1; i <= n; ++i) {
    Point cur = arccos_map(curve.param(h * static_cast<double>(i)));
    cum[i] = cum[i - 1] + distance(prev, cur);
    prev = std::move(cur);
  }
  return cum;
}

}  // namespace detail

/// Length of the arccos-mapped curve. Polyline lengths at n and 2n segments
/// are Richardson-extrapolated (the polyline error is O(n^-2)); n doubles from
/// 1024 until successive estimates agree to 1e-11.
[[nodiscard]] inline double mapped_curve_length(const BoundaryCurve& curve,
                                                std::size_t* segments_out = nullptr) {
  std::size_t n = 1024;
  double coarse = detail::mapped_cumulative_length(curve, n).back();
  double estimate = coarse;
  for (;;) {
    n *= 2;
    const double fine = detail::mapped_cumulative_length(curve, n).back();
    const double next = fine + (fine - coarse) / 3.0;
    const bool done = std::abs(next - estimate) < 1e-11 || n >= (std::size_t{1} << 22);
    estimate = next;
    coarse = fine;
    if (done) break;
  }
  if (segments_out) *segments_out = n;
  return estimate;
}

/// Number of points for one boundary curve: m/2 per unit length of the
/// arccos-mapped curve measured in units of pi, rounded up.
[[nodiscard]] inline std::size_t boundary_count_2d(double mapped_length, std::size_t m) {
  const double target = static_cast<double>(m) * mapped_length / (2.0 * std::numbers::pi);
  return static_cast<std::size_t>(std::ceil(target - 1e-9));
}

/// Points equally spaced in arclength of the arccos-mapped curve, mapped back
/// onto the curve itself.
[[nodiscard]] inline BoundaryPointSet sample_curve(const BoundaryCurve& curve, std::size_t m) {
  std::size_t n = 0;
  const double length = mapped_curve_length(curve, &n);
  const auto cum = detail::mapped_cumulative_length(curve, n);
  const std::size_t count = boundary_count_2d(length, m);
  const double h = 2.0 * std::numbers::pi / static_cast<double>(n);
  BoundaryPointSet set;
  std::size_t seg = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const double s = cum.back() * static_cast<double>(i) / static_cast<double>(count);
    while (seg + 1 < n && cum[seg + 1] < s) ++seg;
    const double span = cum[seg + 1] - cum[seg];
    const double frac = span > 0.0 ? (s - cum[seg]) / span : 0.0;
    const double z = h * (static_cast<double>(seg) + frac);
    set.points.push_back(curve.param(z));
    set.normals.push_back(curve.normal(z));
  }
  return set;
}

[[nodiscard]] inline BoundaryPointSet sample_boundary_2d(const DomainSpec& domain, std::size_t m) {
  if (domain.dim != 2) throw InvalidArgument("sample_boundary_2d: domain is not two-dimensional");
  if (domain.curves.empty())
    throw UnsupportedDomain("sample_boundary_2d: " + domain.name + " has no boundary curve");
  BoundaryPointSet set;
  for (const auto& c : domain.curves) set.append(sample_curve(c, m));
  return set;
}

/// floor(m^2 rho_max^2): a density of m^2 / (4 pi) points per unit area on
/// the sphere circumscribing the surface.
[[nodiscard]] inline std::size_t boundary_count_3d(double max_radius, std::size_t m) {
  const double mm = static_cast<double>(m);
  return static_cast<std::size_t>(std::floor(mm * mm * max_radius * max_radius + 1e-9));
}

/// Fibonacci lattice on the unit sphere, radially projected onto the surface.
[[nodiscard]] inline BoundaryPointSet sample_boundary_3d(const DomainSpec& domain, std::size_t m) {
  if (domain.dim != 3) throw InvalidArgument("sample_boundary_3d: domain is not three-dimensional");
  if (!domain.surface)
    throw UnsupportedDomain("sample_boundary_3d: " + domain.name + " is not star-shaped");
  const auto& surface = *domain.surface;
  const std::size_t count = boundary_count_3d(surface.max_radius, m);
  const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
  BoundaryPointSet set;
  for (std::size_t i = 0; i < count; ++i) {
    const double z = 1.0 - static_cast<double>(2 * i + 1) / static_cast<double>(count);
    const double polar = std::acos(z);
    const double azimuth = std::remainder(golden_angle * static_cast<double>(i), 2.0 * std::numbers::pi);
    set.points.push_back(surface.point(polar, azimuth));
    set.normals.push_back(surface.normal(polar, azimuth));
  }
  return set;
}

[[nodiscard]] inline BoundaryPointSet sample_boundary(const DomainSpec& domain, std::size_t m) {
  return domain.dim == 3 ? sample_boundary_3d(domain, m) : sample_boundary_2d(domain, m);
}

}  // namespace ssem
