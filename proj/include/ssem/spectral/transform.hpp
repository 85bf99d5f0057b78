#pragma once

#include <fftw3.h>

#include <cmath>
#include <cstddef>
#include <map>
#include <mutex>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

#include "ssem/spectral/axis.hpp"
#include "ssem/spectral/tensor.hpp"

namespace ssem {

// Unnormalized trigonometric transforms, in FFTW's conventions:
//   dct2: Y_j = 2 sum_k X_k cos(pi j (2k+1) / 2m)
//   dct3: Y_k = X_0 + 2 sum_{j>=1} X_j cos(pi j (2k+1) / 2m)
//   dst3: Y_k = (-1)^k X_{m-1} + 2 sum_{j<m-1} X_j sin(pi (j+1)(2k+1) / 2m)
//   dct1: Y_k = X_0 + (-1)^k X_n + 2 sum_{0<j<n} X_j cos(pi j k / n)  (n+1 points)

enum class Backend { fast, direct };

enum class TrigKind { dct1, dct2, dct3, dst3 };

namespace detail {

inline fftw_r2r_kind fftw_kind(TrigKind kind) {
  switch (kind) {
    case TrigKind::dct1: return FFTW_REDFT00;
    case TrigKind::dct2: return FFTW_REDFT10;
    case TrigKind::dct3: return FFTW_REDFT01;
    case TrigKind::dst3: return FFTW_RODFT01;
  }
  return FFTW_REDFT10;
}

/// Process-wide cache of FFTW plans. Planning is serialized; executing a
/// plan on caller-owned arrays (new-array execute) is thread-safe.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(TrigKind kind, std::size_t n) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(kind, n);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    std::vector<double> in(n), out(n);
    fftw_plan plan = fftw_plan_r2r_1d(static_cast<int>(n), in.data(), out.data(),
                                      fftw_kind(kind), FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  std::mutex mutex_;
  std::map<std::pair<TrigKind, std::size_t>, fftw_plan> plans_;
};

inline void trig_direct(TrigKind kind, std::span<const double> in, std::span<double> out) {
  const std::size_t len = in.size();
  const double pi = std::numbers::pi;
  if (kind == TrigKind::dct1) {
    const std::size_t n = len - 1;
    for (std::size_t k = 0; k <= n; ++k) {
      double s = in[0] + ((k % 2) ? -in[n] : in[n]);
      for (std::size_t j = 1; j < n; ++j)
        s += 2.0 * in[j] * std::cos(pi * static_cast<double>(j * k) / static_cast<double>(n));
      out[k] = s;
    }
    return;
  }
  const std::size_t m = len;
  const auto angle = [&](std::size_t j, std::size_t k) {
    return pi * static_cast<double>(j) * static_cast<double>(2 * k + 1) /
           static_cast<double>(2 * m);
  };
  for (std::size_t r = 0; r < m; ++r) {
    double s = 0.0;
    switch (kind) {
      case TrigKind::dct2:
        for (std::size_t k = 0; k < m; ++k) s += 2.0 * in[k] * std::cos(angle(r, k));
        break;
      case TrigKind::dct3:
        s = in[0];
        for (std::size_t j = 1; j < m; ++j) s += 2.0 * in[j] * std::cos(angle(j, r));
        break;
      case TrigKind::dst3:
        s = ((r % 2) ? -1.0 : 1.0) * in[m - 1];
        for (std::size_t j = 0; j + 1 < m; ++j) s += 2.0 * in[j] * std::sin(angle(j + 1, r));
        break;
      case TrigKind::dct1:
        break;
    }
    out[r] = s;
  }
}

}  // namespace detail

/// One-dimensional trigonometric transform; `in` and `out` must not alias.
inline void trig_transform(TrigKind kind, std::span<const double> in, std::span<double> out,
                           Backend backend = Backend::fast) {
  if (in.size() != out.size() || in.empty())
    throw InvalidArgument("trig_transform: size mismatch");
  if (kind == TrigKind::dct1 && in.size() < 2)
    throw InvalidArgument("trig_transform: dct1 needs at least two points");
  if (backend == Backend::direct) {
    detail::trig_direct(kind, in, out);
    return;
  }
  fftw_plan plan = detail::PlanCache::instance().get(kind, in.size());
  fftw_execute_r2r(plan, const_cast<double*>(in.data()), out.data());
}

// Chebyshev coefficients on one axis.

/// Roots grid: c_j = (p_j / m) sum_k u_k T_j(x_k), p_0 = 1, p_j = 2.
inline void cheb_forward_roots(std::span<const double> u, std::span<double> c,
                               Backend backend = Backend::fast) {
  const std::size_t m = u.size();
  trig_transform(TrigKind::dct2, u, c, backend);
  const double inv = 1.0 / static_cast<double>(m);
  c[0] *= 0.5 * inv;
  for (std::size_t j = 1; j < m; ++j) c[j] *= inv;
}

/// Roots grid: u_k = sum_j c_j T_j(x_k).
inline void cheb_inverse_roots(std::span<const double> c, std::span<double> u,
                               Backend backend = Backend::fast) {
  std::vector<double> half(c.begin(), c.end());
  for (std::size_t j = 1; j < half.size(); ++j) half[j] *= 0.5;
  trig_transform(TrigKind::dct3, half, u, backend);
}

/// Extrema grid s_j = -cos(pi j / n): coefficients of the degree-n interpolant
/// in T_k of the reference variable s.
inline void cheb_forward_extrema(std::span<const double> u, std::span<double> c,
                                 Backend backend = Backend::fast) {
  const std::size_t n = u.size() - 1;
  trig_transform(TrigKind::dct1, u, c, backend);
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k <= n; ++k) {
    const double gamma = (k == 0 || k == n) ? 2.0 : 1.0;
    const double sign = (k % 2) ? -1.0 : 1.0;
    c[k] *= sign * inv / gamma;
  }
}

inline void cheb_inverse_extrema(std::span<const double> c, std::span<double> u,
                                 Backend backend = Backend::fast) {
  const std::size_t n = c.size() - 1;
  std::vector<double> x(c.begin(), c.end());
  for (std::size_t k = 0; k <= n; ++k) {
    if (k % 2) x[k] = -x[k];
    if (k != 0 && k != n) x[k] *= 0.5;
  }
  trig_transform(TrigKind::dct1, x, u, backend);
}

/// Discrete Chebyshev transform applied successively along every axis.
[[nodiscard]] inline CoefficientTensor forward_cheb(const GridFunction& u, const TensorGrid& grid,
                                                    Backend backend = Backend::fast) {
  if (u.shape() != grid.shape()) throw InvalidArgument("forward_cheb: shape mismatch");
  CoefficientTensor c(u.shape(), u.data());
  for (std::size_t a = 0; a < grid.dim(); ++a) {
    if (grid.is_roots_axis(a))
      transform_lines(c.values(), c.shape(), a,
                      [&](auto in, auto out) { cheb_forward_roots(in, out, backend); });
    else
      transform_lines(c.values(), c.shape(), a,
                      [&](auto in, auto out) { cheb_forward_extrema(in, out, backend); });
  }
  return c;
}

[[nodiscard]] inline GridFunction inverse_cheb(const CoefficientTensor& c, const TensorGrid& grid,
                                               Backend backend = Backend::fast) {
  if (c.shape() != grid.shape()) throw InvalidArgument("inverse_cheb: shape mismatch");
  GridFunction u(c.shape(), c.data());
  for (std::size_t a = 0; a < grid.dim(); ++a) {
    if (grid.is_roots_axis(a))
      transform_lines(u.values(), u.shape(), a,
                      [&](auto in, auto out) { cheb_inverse_roots(in, out, backend); });
    else
      transform_lines(u.values(), u.shape(), a,
                      [&](auto in, auto out) { cheb_inverse_extrema(in, out, backend); });
  }
  return u;
}

}  // namespace ssem
