#include <algorithm>
#include <string>

#include "net_search.hpp"
#include "tnorm/errors.hpp"
#include "tnorm/kernels.hpp"

namespace tnorm::kernels {

ModeSplit split_at(const Shape& shape, std::size_t mode) {
  if (mode >= shape.order()) throw DimensionError("mode index out of range");
  ModeSplit split;
  for (std::size_t k = 0; k < mode; ++k) split.outer *= shape.dim(k);
  split.extent = shape.dim(mode);
  for (std::size_t k = mode + 1; k < shape.order(); ++k) split.inner *= shape.dim(k);
  return split;
}

namespace detail {
void validate_covers(const DenseTensor& x, std::span<const CoverView> covers) {
  if (covers.size() != x.order() || covers.empty())
    throw DimensionError("need one cover per mode");
  for (std::size_t k = 0; k < covers.size(); ++k) {
    if (covers[k].dim != x.shape().dim(k) || covers[k].count() == 0 ||
        covers[k].points.size() % covers[k].dim != 0)
      throw DimensionError("cover " + std::to_string(k) + " does not match the tensor shape");
  }
}
}  // namespace detail

namespace serial {

void collapse(std::span<const double> x, ModeSplit split, std::span<const double> v,
              std::span<double> y) {
  const std::size_t inner = split.inner;
  for (std::size_t o = 0; o < split.outer; ++o) {
    double* yo = y.data() + o * inner;
    std::fill(yo, yo + inner, 0.0);
    for (std::size_t j = 0; j < split.extent; ++j) {
      const double vj = v[j];
      const double* xo = x.data() + (o * split.extent + j) * inner;
      for (std::size_t i = 0; i < inner; ++i) yo[i] += xo[i] * vj;
    }
  }
}

NetMax net_max(const DenseTensor& x, std::span<const CoverView> covers) {
  detail::validate_covers(x, covers);
  detail::NetSearch search(x, covers);
  search.run_all();
  return search.take();
}

double sum_of_squares(std::span<const double> x) {
  double s = 0.0;
  for (double e : x) s += e * e;
  return s;
}

}  // namespace serial
}  // namespace tnorm::kernels
