#pragma once

// Depth-first search over a product of sphere covers, shared by the serial
// and OpenMP net_max kernels. Level d holds X with modes 0..d-1 contracted.

#include <cmath>
#include <vector>

#include "tnorm/kernels.hpp"

namespace tnorm::kernels::detail {

class NetSearch {
 public:
  NetSearch(const DenseTensor& x, std::span<const CoverView> covers)
      : x_(x), covers_(covers), levels_(covers.size()), index_(covers.size(), 0) {
    std::size_t rest = x.size();
    for (std::size_t d = 0; d + 1 < covers.size(); ++d) {
      rest /= x.shape().dim(d);
      levels_[d + 1].resize(rest);
    }
    best_.argmax.assign(covers.size(), 0);
    best_.value = -1.0;
  }

  /// Searches every tuple whose first index is `first`.
  void run_first(std::size_t first) {
    index_[0] = first;
    visit(0, x_.entries(), first, first + 1);
  }

  /// Searches every tuple (K == 1 included).
  void run_all() {
    for (std::size_t i = 0; i < covers_[0].count(); ++i) run_first(i);
  }

  const NetMax& best() const { return best_; }
  NetMax take() { return std::move(best_); }

 private:
  void visit(std::size_t depth, std::span<const double> data, std::size_t lo, std::size_t hi) {
    const CoverView& cover = covers_[depth];
    const std::size_t n = cover.dim;
    if (depth + 1 == covers_.size()) {
      for (std::size_t p = lo; p < hi; ++p) {
        const double* c = cover.points.data() + p * n;
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += data[i] * c[i];
        const double value = std::abs(s);
        ++best_.tuples;
        if (value > best_.value) {
          index_[depth] = p;
          best_.value = value;
          best_.argmax = index_;
        }
      }
      return;
    }
    std::vector<double>& next = levels_[depth + 1];
    const ModeSplit split{1, n, next.size()};
    for (std::size_t p = lo; p < hi; ++p) {
      index_[depth] = p;
      serial::collapse(data, split, cover.points.subspan(p * n, n), next);
      visit(depth + 1, next, 0, covers_[depth + 1].count());
    }
  }

  const DenseTensor& x_;
  std::span<const CoverView> covers_;
  std::vector<std::vector<double>> levels_;
  std::vector<std::size_t> index_;
  NetMax best_;
};

/// True when `a` should replace `b` as the running maximum.
inline bool better(const NetMax& a, const NetMax& b) {
  if (a.value != b.value) return a.value > b.value;
  return a.argmax < b.argmax;
}

void validate_covers(const DenseTensor& x, std::span<const CoverView> covers);

}  // namespace tnorm::kernels::detail
