#include "tnorm/tensor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>

#include "tnorm/errors.hpp"
#include "tnorm/kernels.hpp"

namespace tnorm {

Shape::Shape(std::vector<std::size_t> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw DimensionError("shape must have at least one mode");
  total_ = 1;
  for (std::size_t n : dims_) {
    if (n == 0) throw DimensionError("shape dimensions must be positive");
    if (total_ > std::numeric_limits<std::size_t>::max() / n)
      throw DimensionError("shape " + to_string() + " exceeds the addressable size");
    total_ *= n;
  }
}

Shape Shape::parse(std::string_view text) {
  std::vector<std::size_t> dims;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find_first_of(",x", pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view token = text.substr(pos, end - pos);
    std::size_t value = 0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size())
      throw DimensionError("cannot parse shape '" + std::string(text) + "'");
    dims.push_back(value);
    pos = end + 1;
  }
  return Shape(std::move(dims));
}

std::size_t Shape::sum_dims() const noexcept {
  return std::accumulate(dims_.begin(), dims_.end(), std::size_t{0});
}

std::size_t Shape::flat_index(std::span<const std::size_t> index) const {
  if (index.size() != dims_.size()) throw DimensionError("index order does not match shape");
  std::size_t flat = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (index[k] >= dims_[k]) throw DimensionError("index out of range");
    flat = flat * dims_[k] + index[k];
  }
  return flat;
}

std::vector<std::size_t> Shape::unravel(std::size_t flat) const {
  if (flat >= total_) throw DimensionError("flat index out of range");
  std::vector<std::size_t> index(dims_.size());
  for (std::size_t k = dims_.size(); k-- > 0;) {
    index[k] = flat % dims_[k];
    flat /= dims_[k];
  }
  return index;
}

std::string Shape::to_string() const {
  if (dims_.empty()) return "scalar";
  std::string out;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (k) out += 'x';
    out += std::to_string(dims_[k]);
  }
  return out;
}

DenseTensor::DenseTensor(Shape shape, std::vector<double> entries)
    : shape_(std::move(shape)), entries_(std::move(entries)) {
  if (entries_.size() != shape_.total_size())
    throw DimensionError("entry count " + std::to_string(entries_.size()) +
                         " does not match shape " + shape_.to_string());
  for (double e : entries_)
    if (!std::isfinite(e)) throw ParameterError("tensor entries must be finite");
}

DenseTensor DenseTensor::zeros(Shape shape) {
  std::vector<double> entries(shape.total_size(), 0.0);
  return DenseTensor(std::move(shape), std::move(entries));
}

double DenseTensor::at(std::span<const std::size_t> index) const {
  return entries_[shape_.flat_index(index)];
}

double DenseTensor::at(std::initializer_list<std::size_t> index) const {
  return at(std::span<const std::size_t>(index.begin(), index.size()));
}

double DenseTensor::scalar_value() const {
  if (order() != 0) throw DimensionError("scalar_value on a tensor of order > 0");
  return entries_.front();
}

double euclidean_norm(std::span<const double> v) {
  return std::sqrt(kernels::serial::sum_of_squares(v));
}

UnitTuple::UnitTuple(std::vector<std::vector<double>> vectors) : vectors_(std::move(vectors)) {
  if (vectors_.empty()) throw DimensionError("unit tuple needs at least one vector");
  for (auto& v : vectors_) {
    if (v.empty()) throw DimensionError("unit tuple vectors must be nonempty");
    for (double e : v)
      if (!std::isfinite(e)) throw ParameterError("unit tuple entries must be finite");
    const double norm = euclidean_norm(v);
    if (norm == 0.0) throw ParameterError("cannot normalize a zero vector");
    for (double& e : v) e /= norm;
  }
}

UnitTuple UnitTuple::basis(const Shape& shape, std::span<const std::size_t> index) {
  if (index.size() != shape.order()) throw DimensionError("basis index order mismatch");
  std::vector<std::vector<double>> vectors;
  vectors.reserve(shape.order());
  for (std::size_t k = 0; k < shape.order(); ++k) {
    if (index[k] >= shape.dim(k)) throw DimensionError("basis index out of range");
    std::vector<double> e(shape.dim(k), 0.0);
    e[index[k]] = 1.0;
    vectors.push_back(std::move(e));
  }
  return UnitTuple(std::move(vectors));
}

UnitTuple UnitTuple::basis(const Shape& shape, std::initializer_list<std::size_t> index) {
  return basis(shape, std::span<const std::size_t>(index.begin(), index.size()));
}

bool UnitTuple::matches(const Shape& shape) const noexcept {
  if (shape.order() != vectors_.size()) return false;
  for (std::size_t k = 0; k < vectors_.size(); ++k)
    if (vectors_[k].size() != shape.dim(k)) return false;
  return true;
}

namespace {

// Working buffer for successive contractions: the current dims plus which
// original mode each remaining axis came from.
struct Contraction {
  std::vector<std::size_t> dims;
  std::vector<std::size_t> origin;
  std::vector<double> data;
};

void contract_axis(Contraction& c, std::size_t axis, std::span<const double> v) {
  kernels::ModeSplit split;
  for (std::size_t a = 0; a < axis; ++a) split.outer *= c.dims[a];
  split.extent = c.dims[axis];
  for (std::size_t a = axis + 1; a < c.dims.size(); ++a) split.inner *= c.dims[a];
  std::vector<double> out(split.outer * split.inner);
  kernels::collapse(c.data, split, v, out);
  c.data = std::move(out);
  c.dims.erase(c.dims.begin() + static_cast<std::ptrdiff_t>(axis));
  c.origin.erase(c.origin.begin() + static_cast<std::ptrdiff_t>(axis));
}

// Contracts the listed original modes, largest first (ties: lower mode).
Contraction contract_modes(const DenseTensor& x, const std::vector<std::vector<double>>& u,
                           std::vector<std::size_t> modes) {
  std::stable_sort(modes.begin(), modes.end(), [&](std::size_t a, std::size_t b) {
    return x.shape().dim(a) > x.shape().dim(b);
  });
  Contraction c{x.shape().dims(), {}, {}};
  c.origin.resize(c.dims.size());
  std::iota(c.origin.begin(), c.origin.end(), std::size_t{0});
  bool first = true;
  for (std::size_t mode : modes) {
    const auto axis = static_cast<std::size_t>(
        std::find(c.origin.begin(), c.origin.end(), mode) - c.origin.begin());
    if (first) {
      // Avoid copying the input: contract straight from its storage.
      kernels::ModeSplit split = kernels::split_at(x.shape(), mode);
      c.data.resize(split.outer * split.inner);
      kernels::collapse(x.entries(), split, u[mode], c.data);
      c.dims.erase(c.dims.begin() + static_cast<std::ptrdiff_t>(axis));
      c.origin.erase(c.origin.begin() + static_cast<std::ptrdiff_t>(axis));
      first = false;
    } else {
      contract_axis(c, axis, u[mode]);
    }
  }
  if (first) c.data.assign(x.entries().begin(), x.entries().end());
  return c;
}

}  // namespace

double multilinear_eval(const DenseTensor& x, const UnitTuple& u) {
  if (!u.matches(x.shape()))
    throw DimensionError("unit tuple does not match shape " + x.shape().to_string());
  std::vector<std::size_t> modes(x.order());
  std::iota(modes.begin(), modes.end(), std::size_t{0});
  return contract_modes(x, u.vectors(), std::move(modes)).data.front();
}

std::vector<double> contract_all_but(const DenseTensor& x, const UnitTuple& u, std::size_t keep) {
  if (!u.matches(x.shape()))
    throw DimensionError("unit tuple does not match shape " + x.shape().to_string());
  return contract_all_but(x, u.vectors(), keep);
}

std::vector<double> contract_all_but(const DenseTensor& x,
                                     const std::vector<std::vector<double>>& vectors,
                                     std::size_t keep) {
  if (keep >= x.order()) throw DimensionError("mode index out of range");
  if (vectors.size() != x.order()) throw DimensionError("vector count does not match order");
  for (std::size_t k = 0; k < x.order(); ++k)
    if (vectors[k].size() != x.shape().dim(k))
      throw DimensionError("vector length does not match mode " + std::to_string(k));
  std::vector<std::size_t> modes;
  for (std::size_t k = 0; k < x.order(); ++k)
    if (k != keep) modes.push_back(k);
  return contract_modes(x, vectors, std::move(modes)).data;
}

DenseTensor mode_collapse(const DenseTensor& x, std::size_t mode, std::span<const double> v) {
  if (mode >= x.order())
    throw DimensionError("mode " + std::to_string(mode) + " out of range for order " +
                         std::to_string(x.order()));
  if (v.size() != x.shape().dim(mode))
    throw DimensionError("vector length " + std::to_string(v.size()) + " does not match mode " +
                         std::to_string(mode) + " of size " + std::to_string(x.shape().dim(mode)));
  const kernels::ModeSplit split = kernels::split_at(x.shape(), mode);
  std::vector<double> out(split.outer * split.inner);
  kernels::collapse(x.entries(), split, v, out);
  std::vector<std::size_t> dims = x.shape().dims();
  dims.erase(dims.begin() + static_cast<std::ptrdiff_t>(mode));
  Shape shape = dims.empty() ? Shape::scalar() : Shape(std::move(dims));
  return DenseTensor(std::move(shape), std::move(out));
}

double frobenius_norm(const DenseTensor& x) { return euclidean_norm(x.entries()); }

DenseTensor outer_product(const std::vector<std::vector<double>>& vectors) {
  if (vectors.empty()) throw DimensionError("outer product of an empty list");
  std::vector<std::size_t> dims;
  for (const auto& v : vectors) dims.push_back(v.size());
  Shape shape(std::move(dims));
  std::vector<double> entries{1.0};
  for (const auto& v : vectors) {
    std::vector<double> next;
    next.reserve(entries.size() * v.size());
    for (double a : entries)
      for (double b : v) next.push_back(a * b);
    entries = std::move(next);
  }
  return DenseTensor(std::move(shape), std::move(entries));
}

DenseTensor permute_modes(const DenseTensor& x, std::span<const std::size_t> perm) {
  const std::size_t order = x.order();
  if (perm.size() != order) throw DimensionError("permutation length does not match order");
  std::vector<bool> seen(order, false);
  for (std::size_t p : perm) {
    if (p >= order || seen[p]) throw DimensionError("not a permutation");
    seen[p] = true;
  }
  std::vector<std::size_t> dims(order);
  for (std::size_t k = 0; k < order; ++k) dims[perm[k]] = x.shape().dim(k);
  Shape shape(dims);
  std::vector<double> out(x.size());
  std::vector<std::size_t> target(order);
  for (std::size_t flat = 0; flat < x.size(); ++flat) {
    const auto index = x.shape().unravel(flat);
    for (std::size_t k = 0; k < order; ++k) target[perm[k]] = index[k];
    out[shape.flat_index(target)] = x[flat];
  }
  return DenseTensor(std::move(shape), std::move(out));
}

DenseTensor axpby(double a, const DenseTensor& x, double b, const DenseTensor& y) {
  if (!(x.shape() == y.shape())) throw DimensionError("axpby on different shapes");
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a * x[i] + b * y[i];
  return DenseTensor(x.shape(), std::move(out));
}

}  // namespace tnorm
