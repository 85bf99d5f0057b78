#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ssem/error.hpp"

namespace ssem {

using Shape = std::vector<std::size_t>;

inline std::size_t shape_size(const Shape& shape) {
  std::size_t n = 1;
  for (auto s : shape) n *= s;
  return n;
}

/// Dense real tensor, row-major. Tag distinguishes nodal values from
/// Chebyshev coefficients so the two cannot be mixed up by accident.
template <class Tag>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape) : shape_(std::move(shape)), values_(shape_size(shape_), 0.0) {}
  Tensor(Shape shape, std::vector<double> values)
      : shape_(std::move(shape)), values_(std::move(values)) {
    if (values_.size() != shape_size(shape_))
      throw InvalidArgument("Tensor: value count does not match shape");
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t dim() const noexcept { return shape_.size(); }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::vector<double>& data() noexcept { return values_; }
  const std::vector<double>& data() const noexcept { return values_; }

  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  Shape shape_;
  std::vector<double> values_;
};

struct NodalTag {};
struct CoefficientTag {};

using GridFunction = Tensor<NodalTag>;
using CoefficientTensor = Tensor<CoefficientTag>;

/// Calls fn(base, stride) for every one-dimensional line along `axis`.
inline void for_each_line(const Shape& shape, std::size_t axis,
                          const std::function<void(std::size_t, std::size_t)>& fn) {
  std::size_t stride = 1;
  for (std::size_t a = axis + 1; a < shape.size(); ++a) stride *= shape[a];
  std::size_t outer = 1;
  for (std::size_t a = 0; a < axis; ++a) outer *= shape[a];
  const std::size_t len = shape[axis];
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t i = 0; i < stride; ++i) fn(o * len * stride + i, stride);
}

/// Applies a line transform `op(in, out)` to every line along `axis`, in place.
template <class LineOp>
void transform_lines(std::span<double> values, const Shape& shape, std::size_t axis,
                     LineOp&& op) {
  const std::size_t len = shape[axis];
  std::vector<double> in(len), out(len);
  for_each_line(shape, axis, [&](std::size_t base, std::size_t stride) {
    for (std::size_t k = 0; k < len; ++k) in[k] = values[base + k * stride];
    op(std::span<const double>(in), std::span<double>(out));
    for (std::size_t k = 0; k < len; ++k) values[base + k * stride] = out[k];
  });
}

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace ssem
