#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tnorm {

/// Mode dimensions (n_1, ..., n_K) of a dense tensor.
///
/// User-facing shapes have K >= 1 and every n_k >= 1. The only 0-way shape
/// is Shape::scalar(), which is what collapsing every mode produces.
class Shape {
 public:
  Shape() = default;  // 0-way
  explicit Shape(std::vector<std::size_t> dims);

  static Shape scalar() { return Shape{}; }
  /// Parses "10,10,10" or "10x10x10".
  static Shape parse(std::string_view text);

  std::size_t order() const noexcept { return dims_.size(); }
  const std::vector<std::size_t>& dims() const noexcept { return dims_; }
  std::size_t dim(std::size_t mode) const { return dims_.at(mode); }
  std::size_t total_size() const noexcept { return total_; }
  std::size_t sum_dims() const noexcept;

  /// Row-major (last index fastest): flat = sum_k i_k * prod_{j>k} n_j.
  std::size_t flat_index(std::span<const std::size_t> index) const;
  std::vector<std::size_t> unravel(std::size_t flat) const;

  /// "10x10x10"; the 0-way shape prints as "scalar".
  std::string to_string() const;

  friend bool operator==(const Shape&, const Shape&) = default;

 private:
  std::vector<std::size_t> dims_;
  std::size_t total_ = 1;
};

/// Immutable dense K-way tensor of finite doubles, row-major layout.
class DenseTensor {
 public:
  DenseTensor(Shape shape, std::vector<double> entries);
  static DenseTensor zeros(Shape shape);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t order() const noexcept { return shape_.order(); }
  std::size_t size() const noexcept { return entries_.size(); }
  std::span<const double> entries() const noexcept { return entries_; }

  double operator[](std::size_t flat) const { return entries_[flat]; }
  double at(std::span<const std::size_t> index) const;
  double at(std::initializer_list<std::size_t> index) const;

  /// Value of a 0-way tensor.
  double scalar_value() const;

 private:
  Shape shape_;
  std::vector<double> entries_;
};

/// One unit vector per mode. Vectors are normalized on construction.
class UnitTuple {
 public:
  explicit UnitTuple(std::vector<std::vector<double>> vectors);

  /// Standard basis tuple (e_{i_1}, ..., e_{i_K}) selecting one entry.
  static UnitTuple basis(const Shape& shape, std::span<const std::size_t> index);
  static UnitTuple basis(const Shape& shape, std::initializer_list<std::size_t> index);

  std::size_t order() const noexcept { return vectors_.size(); }
  std::span<const double> vector(std::size_t mode) const { return vectors_.at(mode); }
  const std::vector<std::vector<double>>& vectors() const noexcept { return vectors_; }
  bool matches(const Shape& shape) const noexcept;

 private:
  std::vector<std::vector<double>> vectors_;
};

/// X(u_1, ..., u_K) by successive mode contractions, largest mode first.
double multilinear_eval(const DenseTensor& x, const UnitTuple& u);

/// Contracts mode `mode` of `x` against `v`; the result has order K-1.
DenseTensor mode_collapse(const DenseTensor& x, std::size_t mode, std::span<const double> v);

/// Contracts every mode except `keep` against the tuple; returns a vector of
/// length n_keep. This is the gradient of the multilinear form in u_keep.
std::vector<double> contract_all_but(const DenseTensor& x, const UnitTuple& u, std::size_t keep);
/// Same, for raw per-mode vectors (lengths must match the shape; no
/// normalization is applied).
std::vector<double> contract_all_but(const DenseTensor& x,
                                     const std::vector<std::vector<double>>& vectors,
                                     std::size_t keep);

double frobenius_norm(const DenseTensor& x);

/// v_1 o v_2 o ... o v_K.
DenseTensor outer_product(const std::vector<std::vector<double>>& vectors);

/// Y_{i_perm[0], ..., i_perm[K-1]} = X_{i_0, ..., i_{K-1}}, i.e. mode k of X
/// becomes mode perm[k] of Y.
DenseTensor permute_modes(const DenseTensor& x, std::span<const std::size_t> perm);

/// a*X + b*Y on identical shapes.
DenseTensor axpby(double a, const DenseTensor& x, double b, const DenseTensor& y);

double euclidean_norm(std::span<const double> v);

}  // namespace tnorm
