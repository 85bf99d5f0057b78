#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ssem/error.hpp"

namespace ssem {

using Point = std::vector<double>;

/// Signed level function: negative inside the domain.
using LevelFunction = std::function<double(std::span<const double>)>;

/// Closed planar curve parametrized by z in [0, 2 pi).
struct BoundaryCurve {
  std::function<Point(double)> param;
  /// Outward unit normal at param(z).
  std::function<Point(double)> normal;
};

/// Star-shaped surface r = radius(polar, azimuth) about the origin.
struct StarSurface {
  std::function<double(double, double)> radius;
  std::function<double(double, double)> d_polar;
  std::function<double(double, double)> d_azimuth;
  /// Largest radius attained on the surface.
  double max_radius = 1.0;

  Point point(double polar, double azimuth) const {
    const double r = radius(polar, azimuth);
    return {r * std::sin(polar) * std::cos(azimuth), r * std::sin(polar) * std::sin(azimuth),
            r * std::cos(polar)};
  }

  /// Outward unit normal, from the gradient of |x| - radius(polar, azimuth).
  /// Requires sin(polar) != 0.
  Point normal(double polar, double azimuth) const {
    const double r = radius(polar, azimuth);
    const double sp = std::sin(polar), cp = std::cos(polar);
    const double sa = std::sin(azimuth), ca = std::cos(azimuth);
    const double gp = d_polar(polar, azimuth) / r;
    const double ga = d_azimuth(polar, azimuth) / (r * sp);
    Point n{sp * ca - gp * cp * ca + ga * sa, sp * sa - gp * cp * sa - ga * ca, cp + gp * sp};
    const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
    for (auto& v : n) v /= len;
    return n;
  }
};

struct DomainSpec {
  std::string name;
  std::size_t dim = 2;
  LevelFunction level;
  /// 2D boundary components (an annulus has two).
  std::vector<BoundaryCurve> curves;
  /// 3D boundary, when star-shaped.
  std::optional<StarSurface> surface;

  bool inside(std::span<const double> x, double tol) const { return level(x) < -tol; }
};

namespace domains {

/// Curve r = radius(theta) traversed counter-clockwise; outward normal
/// proportional to R e_r - R' e_theta.
inline BoundaryCurve polar_curve(std::function<double(double)> radius,
                                 std::function<double(double)> d_radius, bool outward_is_out = true) {
  BoundaryCurve c;
  c.param = [radius](double z) {
    const double r = radius(z);
    return Point{r * std::cos(z), r * std::sin(z)};
  };
  c.normal = [radius, d_radius, outward_is_out](double z) {
    const double r = radius(z), dr = d_radius(z);
    Point n{r * std::cos(z) + dr * std::sin(z), r * std::sin(z) - dr * std::cos(z)};
    const double len = std::hypot(n[0], n[1]);
    const double s = outward_is_out ? 1.0 : -1.0;
    return Point{s * n[0] / len, s * n[1] / len};
  };
  return c;
}

inline double polar_angle(std::span<const double> x) { return std::atan2(x[1], x[0]); }

/// { r < radius }.
inline DomainSpec disc(double radius) {
  DomainSpec d;
  d.name = "disc";
  d.dim = 2;
  d.level = [radius](std::span<const double> x) { return std::hypot(x[0], x[1]) - radius; };
  d.curves.push_back(polar_curve([radius](double) { return radius; }, [](double) { return 0.0; }));
  return d;
}

/// { r < scale (1 + amplitude cos(lobes theta)) }.
inline DomainSpec star(double scale, double amplitude, int lobes) {
  const auto radius = [=](double t) { return scale * (1.0 + amplitude * std::cos(lobes * t)); };
  const auto d_radius = [=](double t) { return -scale * amplitude * lobes * std::sin(lobes * t); };
  DomainSpec d;
  d.name = "star";
  d.dim = 2;
  d.level = [radius](std::span<const double> x) {
    return std::hypot(x[0], x[1]) - radius(polar_angle(x));
  };
  d.curves.push_back(polar_curve(radius, d_radius));
  return d;
}

/// { inner < r < scale (1 + amplitude cos(lobes theta)) }.
inline DomainSpec star_annulus(double inner, double scale, double amplitude, int lobes) {
  DomainSpec outer = star(scale, amplitude, lobes);
  DomainSpec d;
  d.name = "star-annulus";
  d.dim = 2;
  d.level = [outer_level = outer.level, inner](std::span<const double> x) {
    return std::max(inner - std::hypot(x[0], x[1]), outer_level(x));
  };
  d.curves.push_back(outer.curves.front());
  d.curves.push_back(polar_curve([inner](double) { return inner; }, [](double) { return 0.0; },
                                 /*outward_is_out=*/false));
  return d;
}

/// The whole open box (-1, 1)^dim, with no boundary description.
inline DomainSpec box(std::size_t dim) {
  DomainSpec d;
  d.name = "box";
  d.dim = dim;
  d.level = [](std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m - 1.0;
  };
  return d;
}

inline DomainSpec star_3d(StarSurface surface, std::string name) {
  DomainSpec d;
  d.name = std::move(name);
  d.dim = 3;
  d.level = [radius = surface.radius](std::span<const double> x) {
    const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    const double polar = r > 0.0 ? std::acos(std::clamp(x[2] / r, -1.0, 1.0)) : 0.0;
    const double azimuth = std::atan2(x[1], x[0]);
    return r - radius(polar, azimuth);
  };
  d.surface = std::move(surface);
  return d;
}

inline DomainSpec ball(double radius) {
  StarSurface s;
  s.radius = [radius](double, double) { return radius; };
  s.d_polar = [](double, double) { return 0.0; };
  s.d_azimuth = [](double, double) { return 0.0; };
  s.max_radius = radius;
  return star_3d(std::move(s), "ball");
}

/// Omega_1: disc of radius 0.95.
inline DomainSpec omega1() {
  auto d = disc(0.95);
  d.name = "omega1";
  return d;
}

/// Omega_2: five-lobed star r < 0.8 (1 + 0.2 cos 5 theta).
inline DomainSpec omega2() {
  auto d = star(0.8, 0.2, 5);
  d.name = "omega2";
  return d;
}

/// Omega_3: 0.3 < r < 0.8 (1 + 0.2 cos 5 theta).
inline DomainSpec omega3() {
  auto d = star_annulus(0.3, 0.8, 0.2, 5);
  d.name = "omega3";
  return d;
}

/// Omega_4: r < 0.85 + 0.1 sin(polar) cos(4 azimuth).
inline DomainSpec omega4() {
  StarSurface s;
  s.radius = [](double p, double a) { return 0.85 + 0.1 * std::sin(p) * std::cos(4.0 * a); };
  s.d_polar = [](double p, double a) { return 0.1 * std::cos(p) * std::cos(4.0 * a); };
  s.d_azimuth = [](double p, double a) { return -0.4 * std::sin(p) * std::sin(4.0 * a); };
  s.max_radius = 0.95;
  return star_3d(std::move(s), "omega4");
}

}  // namespace domains
}  // namespace ssem
