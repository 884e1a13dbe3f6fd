#include <algorithm>

#include <omp.h>

#include "net_search.hpp"
#include "tnorm/kernels.hpp"

namespace tnorm::kernels {
namespace parallel {

void collapse(std::span<const double> x, ModeSplit split, std::span<const double> v,
              std::span<double> y) {
  constexpr std::size_t kBlock = 512;
  const std::size_t inner = split.inner;
  const std::size_t blocks = (inner + kBlock - 1) / kBlock;
  const auto work = static_cast<std::int64_t>(split.outer * blocks);
#pragma omp parallel for schedule(static)
  for (std::int64_t w = 0; w < work; ++w) {
    const std::size_t o = static_cast<std::size_t>(w) / blocks;
    const std::size_t lo = (static_cast<std::size_t>(w) % blocks) * kBlock;
    const std::size_t hi = std::min(inner, lo + kBlock);
    double* yo = y.data() + o * inner;
    std::fill(yo + lo, yo + hi, 0.0);
    for (std::size_t j = 0; j < split.extent; ++j) {
      const double vj = v[j];
      const double* xo = x.data() + (o * split.extent + j) * inner;
      for (std::size_t i = lo; i < hi; ++i) yo[i] += xo[i] * vj;
    }
  }
}

NetMax net_max(const DenseTensor& x, std::span<const CoverView> covers) {
  detail::validate_covers(x, covers);
  const auto first = static_cast<std::int64_t>(covers[0].count());
  NetMax best;
  best.value = -1.0;
  best.argmax.assign(covers.size(), 0);
  std::uint64_t tuples = 0;
#pragma omp parallel reduction(+ : tuples)
  {
    detail::NetSearch search(x, covers);
#pragma omp for schedule(dynamic, 1) nowait
    for (std::int64_t i = 0; i < first; ++i) search.run_first(static_cast<std::size_t>(i));
    tuples += search.best().tuples;
#pragma omp critical(tnorm_net_max)
    {
      if (search.best().tuples > 0 && detail::better(search.best(), best)) {
        best.value = search.best().value;
        best.argmax = search.best().argmax;
      }
    }
  }
  best.tuples = tuples;
  return best;
}

}  // namespace parallel

void collapse(std::span<const double> x, ModeSplit split, std::span<const double> v,
              std::span<double> y) {
  if (x.size() >= kParallelThreshold && !omp_in_parallel() && omp_get_max_threads() > 1)
    parallel::collapse(x, split, v, y);
  else
    serial::collapse(x, split, v, y);
}

NetMax net_max(const DenseTensor& x, std::span<const CoverView> covers) {
  std::uint64_t product = 1;
  for (const auto& c : covers) product *= c.count();
  if (product >= 4096 && !omp_in_parallel() && omp_get_max_threads() > 1)
    return parallel::net_max(x, covers);
  return serial::net_max(x, covers);
}

}  // namespace tnorm::kernels
