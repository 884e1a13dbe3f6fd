#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "test_util.hpp"
#include "tnorm/errors.hpp"
#include "tnorm/tensor.hpp"

using namespace tnorm;
using tnorm::testing::brute_force_eval;
using tnorm::testing::rel_err;

TEST_CASE("shape validation and row-major indexing") {
  CHECK_THROWS_AS(Shape(std::vector<std::size_t>{}), DimensionError);
  CHECK_THROWS_AS(Shape({3, 0, 2}), DimensionError);
  CHECK_THROWS_AS(Shape({std::size_t{1} << 40, std::size_t{1} << 40}), DimensionError);

  const Shape s({3, 4, 2});
  CHECK(s.order() == 3);
  CHECK(s.total_size() == 24);
  CHECK(s.sum_dims() == 9);
  // flat = (i0 * 4 + i1) * 2 + i2
  const std::size_t idx[] = {2, 1, 1};
  CHECK(s.flat_index(idx) == (2 * 4 + 1) * 2 + 1);
  for (std::size_t f = 0; f < s.total_size(); ++f) CHECK(s.flat_index(s.unravel(f)) == f);

  CHECK(Shape::parse("10,10,10") == Shape({10, 10, 10}));
  CHECK(Shape::parse("3x4") == Shape({3, 4}));
  CHECK_THROWS_AS(Shape::parse("3,,4"), DimensionError);
  CHECK_THROWS_AS(Shape::parse("a"), DimensionError);
  CHECK(Shape({3, 4, 2}).to_string() == "3x4x2");
}

TEST_CASE("dense tensor rejects bad construction") {
  CHECK_THROWS_AS(DenseTensor(Shape({2, 2}), {1.0, 2.0, 3.0}), DimensionError);
  CHECK_THROWS_AS(DenseTensor(Shape({2}), {1.0, std::nan("")}), ParameterError);
  CHECK_THROWS_AS(DenseTensor(Shape({2}), {1.0, INFINITY}), ParameterError);
}

TEST_CASE("unit tuple normalizes and rejects zero vectors") {
  UnitTuple u({{3.0, 4.0}, {0.0, 0.0, 2.0}});
  CHECK(std::abs(euclidean_norm(u.vector(0)) - 1.0) < 1e-12);
  CHECK(u.vector(0)[0] == doctest::Approx(0.6));
  CHECK(u.vector(1)[2] == 1.0);
  CHECK_THROWS_AS(UnitTuple({{0.0, 0.0}}), ParameterError);
  CHECK_THROWS_AS(UnitTuple({}), DimensionError);
}

TEST_CASE("multilinear_eval examples") {
  SUBCASE("basis tuple selects one entry") {
    std::vector<double> e(3 * 4 * 2, 0.0);
    const Shape s({3, 4, 2});
    // X_{2,3,1} in 1-based indexing.
    const std::size_t idx[] = {1, 2, 0};
    e[s.flat_index(idx)] = 5.0;
    const DenseTensor x(s, e);
    CHECK(multilinear_eval(x, UnitTuple::basis(s, {1, 2, 0})) == 5.0);
  }
  SUBCASE("rank one tensor at its own factors") {
    std::mt19937_64 gen(3);
    const auto a = testing::unit_vector(gen, 3), b = testing::unit_vector(gen, 4),
               c = testing::unit_vector(gen, 2);
    const DenseTensor x = outer_product({a, b, c});
    CHECK(multilinear_eval(x, UnitTuple({a, b, c})) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("agrees with the nested-loop sum") {
    std::mt19937_64 gen(17);
    for (int rep = 0; rep < 20; ++rep) {
      const DenseTensor x = testing::gaussian_tensor(gen, {3, 4, 2});
      const UnitTuple u = testing::unit_tuple(gen, x.shape());
      CHECK(rel_err(multilinear_eval(x, u), brute_force_eval(x, u.vectors())) < 1e-12);
    }
  }
  SUBCASE("shape mismatch") {
    const DenseTensor x = DenseTensor::zeros(Shape({2, 2}));
    CHECK_THROWS_AS(multilinear_eval(x, UnitTuple({{1.0, 0.0}, {1.0, 0.0, 0.0}})), DimensionError);
    CHECK_THROWS_AS(multilinear_eval(x, UnitTuple({{1.0, 0.0}})), DimensionError);
  }
}

TEST_CASE("mode_collapse examples") {
  SUBCASE("vector collapses to a scalar inner product") {
    const DenseTensor x(Shape({3}), {1.0, 2.0, 3.0});
    const double v[] = {4.0, 5.0, 6.0};
    const DenseTensor y = mode_collapse(x, 0, v);
    CHECK(y.order() == 0);
    CHECK(y.scalar_value() == 32.0);
  }
  SUBCASE("identity matrix against e_1") {
    const DenseTensor eye(Shape({2, 2}), {1.0, 0.0, 0.0, 1.0});
    const double v[] = {1.0, 0.0};
    const DenseTensor y = mode_collapse(eye, 0, v);
    CHECK(y.shape() == Shape({2}));
    CHECK(y[0] == 1.0);
    CHECK(y[1] == 0.0);
  }
  SUBCASE("collapse order does not matter") {
    std::mt19937_64 gen(5);
    const DenseTensor x = testing::gaussian_tensor(gen, {3, 4, 2});
    const UnitTuple u = testing::unit_tuple(gen, x.shape());
    // modes 3, 1, 2 (1-based): collapse the last, then the first, then what is left.
    const double a = mode_collapse(mode_collapse(mode_collapse(x, 2, u.vector(2)), 0, u.vector(0)),
                                   0, u.vector(1))
                         .scalar_value();
    const double b = mode_collapse(mode_collapse(mode_collapse(x, 0, u.vector(0)), 0, u.vector(1)),
                                   0, u.vector(2))
                         .scalar_value();
    CHECK(rel_err(a, b) < 1e-12);
    CHECK(rel_err(a, multilinear_eval(x, u)) < 1e-12);
  }
  SUBCASE("errors") {
    const DenseTensor x = DenseTensor::zeros(Shape({2, 3}));
    const double v2[] = {1.0, 2.0};
    CHECK_THROWS_AS(mode_collapse(x, 2, v2), DimensionError);
    CHECK_THROWS_AS(mode_collapse(x, 1, v2), DimensionError);
  }
}

TEST_CASE("frobenius_norm examples") {
  CHECK(frobenius_norm(DenseTensor::zeros(Shape({3, 3}))) == 0.0);
  CHECK(frobenius_norm(DenseTensor(Shape({1}), {3.0})) == 3.0);
  CHECK(frobenius_norm(DenseTensor(Shape({2, 2}), {1.0, 1.0, 1.0, 1.0})) == 2.0);
}

TEST_CASE("outer_product examples") {
  const DenseTensor e = outer_product({{1.0, 0.0}, {0.0, 1.0}});
  CHECK(e.shape() == Shape({2, 2}));
  CHECK(std::vector<double>(e.entries().begin(), e.entries().end()) ==
        std::vector<double>{0.0, 1.0, 0.0, 0.0});

  const DenseTensor m = outer_product({{1.0, 2.0}, {3.0, 4.0}});
  CHECK(std::vector<double>(m.entries().begin(), m.entries().end()) ==
        std::vector<double>{3.0, 4.0, 6.0, 8.0});

  std::mt19937_64 gen(9);
  const DenseTensor u = outer_product({testing::unit_vector(gen, 3), testing::unit_vector(gen, 5),
                                       testing::unit_vector(gen, 2)});
  CHECK(frobenius_norm(u) == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(outer_product({}), DimensionError);
}

// Property checks on random instances, hand-rolled generator.
TEST_CASE("multilinear form properties") {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<std::size_t> order_dist(1, 4), dim_dist(1, 6);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<std::size_t> dims(order_dist(gen));
    for (auto& d : dims) d = dim_dist(gen);
    const DenseTensor x = testing::gaussian_tensor(gen, dims);
    const DenseTensor y = testing::gaussian_tensor(gen, dims);
    const UnitTuple u = testing::unit_tuple(gen, x.shape());
    const double fx = multilinear_eval(x, u);

    // Cauchy-Schwarz.
    CHECK(std::abs(fx) <= frobenius_norm(x) * (1.0 + 1e-12));

    // Linearity in X.
    const double a = 1.7, b = -0.3;
    const double lhs = multilinear_eval(axpby(a, x, b, y), u);
    const double rhs = a * fx + b * multilinear_eval(y, u);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(a * fx) + std::abs(b * multilinear_eval(y, u)) + 1e-300) * 10);

    // Mode permutation.
    std::vector<std::size_t> perm(dims.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<std::vector<double>> pu(dims.size());
    for (std::size_t k = 0; k < dims.size(); ++k)
      pu[perm[k]] = std::vector<double>(u.vector(k).begin(), u.vector(k).end());
    CHECK(rel_err(multilinear_eval(permute_modes(x, perm), UnitTuple(pu)), fx) < 1e-12);

    // Full collapse in any order equals the brute-force sum.
    std::vector<std::size_t> order(dims.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), gen);
    DenseTensor cur = x;
    std::vector<std::size_t> remaining(order.size());
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});
    for (std::size_t mode : order) {
      const auto axis = static_cast<std::size_t>(
          std::find(remaining.begin(), remaining.end(), mode) - remaining.begin());
      cur = mode_collapse(cur, axis, u.vector(mode));
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(axis));
    }
    CHECK(std::abs(cur.scalar_value() - brute_force_eval(x, u.vectors())) <=
          1e-12 * std::max(1.0, frobenius_norm(x)));
  }
}

TEST_CASE("K = 1 degenerates to an inner product") {
  const DenseTensor x(Shape({4}), {1.0, -2.0, 2.0, 0.0});
  const UnitTuple u({{1.0, -2.0, 2.0, 0.0}});
  CHECK(multilinear_eval(x, u) == doctest::Approx(3.0));
  CHECK(contract_all_but(x, u, 0) == std::vector<double>{1.0, -2.0, 2.0, 0.0});
}
