#pragma once

// Inner loops shared by the tensor, estimator and certificate code.
//
// Every kernel exists twice: `serial` is the reference implementation kept
// for testing, `parallel` is the OpenMP version. Both accumulate each output
// element in the same order, so their results are bit-identical for any
// thread count; tests assert exact equality.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tnorm/tensor.hpp"

namespace tnorm::kernels {

/// Row-major view of a tensor around one mode: [outer][extent][inner].
struct ModeSplit {
  std::size_t outer = 1;
  std::size_t extent = 1;
  std::size_t inner = 1;
};

ModeSplit split_at(const Shape& shape, std::size_t mode);

/// Points of one sphere cover, stored point-major.
struct CoverView {
  std::span<const double> points;
  std::size_t dim = 0;
  std::size_t count() const noexcept { return dim == 0 ? 0 : points.size() / dim; }
};

/// Largest |X(c_1, ..., c_K)| over the product of covers. Ties resolve to the
/// lexicographically smallest index tuple.
struct NetMax {
  double value = 0.0;
  std::vector<std::size_t> argmax;
  std::uint64_t tuples = 0;
};

namespace serial {
/// y[o, i] = sum_j x[o, j, i] * v[j]; y is overwritten.
void collapse(std::span<const double> x, ModeSplit split, std::span<const double> v,
              std::span<double> y);
NetMax net_max(const DenseTensor& x, std::span<const CoverView> covers);
double sum_of_squares(std::span<const double> x);
}  // namespace serial

namespace parallel {
void collapse(std::span<const double> x, ModeSplit split, std::span<const double> v,
              std::span<double> y);
NetMax net_max(const DenseTensor& x, std::span<const CoverView> covers);
}  // namespace parallel

/// Below this many input entries the dispatchers stay serial.
inline constexpr std::size_t kParallelThreshold = 1u << 15;

/// Picks the parallel kernel for large inputs outside an active parallel
/// region, serial otherwise. The result does not depend on the choice.
void collapse(std::span<const double> x, ModeSplit split, std::span<const double> v,
              std::span<double> y);
NetMax net_max(const DenseTensor& x, std::span<const CoverView> covers);

}  // namespace tnorm::kernels
