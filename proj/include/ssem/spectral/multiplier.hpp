#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ssem/spectral/axis.hpp"
#include "ssem/spectral/tensor.hpp"
#include "ssem/spectral/transform.hpp"

namespace ssem {

/// Maps a multi-frequency (one integer per axis) to a real multiplier.
using FrequencyFunction = std::function<double(std::span<const std::size_t>)>;

/// Samples mu on every multi-frequency of the grid, in flat order.
[[nodiscard]] inline std::vector<double> sample_multiplier(const TensorGrid& grid,
                                                           const FrequencyFunction& mu) {
  std::vector<double> out(grid.size());
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    const auto k = grid.unflatten(flat);
    out[flat] = mu(k);
  }
  return out;
}

/// inverse_cheb(M[mu] forward_cheb(u)) with mu given as a sampled tensor.
[[nodiscard]] inline GridFunction apply_multiplier(const GridFunction& u, const TensorGrid& grid,
                                                   std::span<const double> mu,
                                                   Backend backend = Backend::fast) {
  if (mu.size() != grid.size()) throw InvalidArgument("apply_multiplier: size mismatch");
  CoefficientTensor c = forward_cheb(u, grid, backend);
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= mu[i];
  return inverse_cheb(c, grid, backend);
}

[[nodiscard]] inline GridFunction apply_multiplier(const GridFunction& u, const TensorGrid& grid,
                                                   const FrequencyFunction& mu,
                                                   Backend backend = Backend::fast) {
  const auto sampled = sample_multiplier(grid, mu);
  return apply_multiplier(u, grid, std::span<const double>(sampled), backend);
}

}  // namespace ssem
