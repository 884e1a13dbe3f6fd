#include <doctest.h>

#include <numbers>

#include "test_util.hpp"
#include "tnorm/bounds.hpp"
#include "tnorm/errors.hpp"
#include "tnorm/spectral.hpp"

using namespace tnorm;
using tnorm::testing::rel_err;

namespace {

// Max over a grid of angles for modes 1 and 2; the best mode-3 vector is the
// normalized contraction, so its value is the length of that contraction.
double grid_norm_2x2x2(const DenseTensor& x, int steps) {
  double best = 0.0;
  for (int i = 0; i < steps; ++i) {
    const double a = std::numbers::pi * i / steps;
    const double u0 = std::cos(a), u1 = std::sin(a);
    for (int j = 0; j < steps; ++j) {
      const double b = std::numbers::pi * j / steps;
      const double v0 = std::cos(b), v1 = std::sin(b);
      double w[2] = {0.0, 0.0};
      for (int k = 0; k < 2; ++k)
        w[k] = x.at({0, 0, std::size_t(k)}) * u0 * v0 + x.at({0, 1, std::size_t(k)}) * u0 * v1 +
               x.at({1, 0, std::size_t(k)}) * u1 * v0 + x.at({1, 1, std::size_t(k)}) * u1 * v1;
      best = std::max(best, std::hypot(w[0], w[1]));
    }
  }
  return best;
}

double min_distance(const SphereCover& c, std::span<const double> x) {
  double best = INFINITY;
  for (std::size_t i = 0; i < c.size(); ++i) {
    double d = 0.0;
    for (std::size_t k = 0; k < c.dim; ++k) d += (c.point(i)[k] - x[k]) * (c.point(i)[k] - x[k]);
    best = std::min(best, d);
  }
  return std::sqrt(best);
}

}  // namespace

TEST_CASE("power iteration on rank-one tensors") {
  std::mt19937_64 gen(41);
  for (double lambda : {1.0, -3.5, 1e-3}) {
    auto a = testing::unit_vector(gen, 4), b = testing::unit_vector(gen, 3),
         c = testing::unit_vector(gen, 5);
    for (double& e : a) e *= lambda;
    const auto res = power_iteration(outer_product({a, b, c}), {});
    CHECK(rel_err(res.value, std::abs(lambda)) < 1e-10);
    CHECK(res.converged);
  }
}

TEST_CASE("power iteration on matrices matches the largest singular value") {
  std::mt19937_64 gen(42);
  PowerIterConfig cfg;
  cfg.tol = 1e-15;
  cfg.max_iters = 20000;
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t m = 2 + rep % 7, n = 3 + (rep * 5) % 9;
    const DenseTensor a = testing::gaussian_tensor(gen, {m, n});
    CHECK(rel_err(power_iteration(a, cfg).value, testing::largest_singular_value(a)) < 1e-8);
  }
}

TEST_CASE("power iteration basics") {
  SUBCASE("zero tensor") {
    const auto res = power_iteration(DenseTensor::zeros(Shape({3, 3, 3})), {});
    CHECK(res.value == 0.0);
    CHECK(res.argmax.matches(Shape({3, 3, 3})));
  }
  SUBCASE("K = 1 returns the Euclidean norm") {
    const DenseTensor x(Shape({3}), {2.0, -1.0, 2.0});
    CHECK(power_iteration(x, {}).value == doctest::Approx(3.0).epsilon(1e-14));
  }
  SUBCASE("result is reproducible and reports a feasible tuple") {
    std::mt19937_64 gen(43);
    const DenseTensor x = testing::gaussian_tensor(gen, {6, 5, 4});
    PowerIterConfig cfg;
    cfg.seed = 5;
    const auto r1 = power_iteration(x, cfg);
    const auto r2 = power_iteration(x, cfg);
    CHECK(r1.value == r2.value);
    CHECK(r1.restart_values == r2.restart_values);
    CHECK(r1.restart_values.size() == cfg.restarts);
    CHECK(r1.value == std::abs(multilinear_eval(x, r1.argmax)));
    CHECK(r1.value <= frobenius_norm(x));
    CHECK(rel_err(r1.value, *std::max_element(r1.restart_values.begin(), r1.restart_values.end())) < 1e-12);
  }
  SUBCASE("invalid configuration") {
    const DenseTensor x = DenseTensor::zeros(Shape({2, 2}));
    PowerIterConfig cfg;
    cfg.restarts = 0;
    CHECK_THROWS_AS(power_iteration(x, cfg), ParameterError);
    cfg = {};
    cfg.tol = -1.0;
    CHECK_THROWS_AS(power_iteration(x, cfg), ParameterError);
  }
}

TEST_CASE("sweep updates never decrease the objective") {
  std::mt19937_64 gen(44);
  PowerIterConfig cfg;
  cfg.record_trace = true;
  cfg.restarts = 4;
  for (int rep = 0; rep < 10; ++rep) {
    const DenseTensor x = testing::gaussian_tensor(gen, {5, 4, 3, 2});
    const auto res = power_iteration(x, cfg);
    REQUIRE(res.traces.size() == cfg.restarts);
    for (const auto& trace : res.traces)
      for (std::size_t i = 1; i < trace.size(); ++i)
        CHECK(trace[i] >= trace[i - 1] * (1.0 - 1e-12));
  }
}

TEST_CASE("sphere covers") {
  CHECK(build_sphere_cover(1, 0.3).points == std::vector<double>{1.0, -1.0});
  std::mt19937_64 gen(45);
  for (std::size_t n : {2, 3, 4}) {
    for (double eps : {0.5, kK0 / 3, 0.1}) {
      if (n == 4 && eps < 0.2) continue;
      const auto c = build_sphere_cover(n, eps);
      for (std::size_t i = 0; i < c.size(); ++i)
        CHECK(euclidean_norm(c.point(i)) == doctest::Approx(1.0).epsilon(1e-14));
      for (int rep = 0; rep < 500; ++rep) {
        const auto x = testing::unit_vector(gen, n);
        CHECK(min_distance(c, x) <= eps);
      }
      if (n == 2) {
        // Arcs of chord eps cover the circle only with at least this many points.
        CHECK(c.size() >= std::ceil(std::numbers::pi / std::asin(eps / 2.0)));
      }
    }
  }
  const auto a = build_sphere_cover(3, 0.2), b = build_sphere_cover(3, 0.2);
  CHECK(a.points == b.points);
  CHECK_THROWS_AS(build_sphere_cover(3, 0.05, 100), NetTooLarge);
  CHECK_THROWS_AS(build_sphere_cover(3, 0.0), ParameterError);
}

TEST_CASE("certified upper bound") {
  std::mt19937_64 gen(46);
  const double eps = kK0 / 3;
  for (int rep = 0; rep < 10; ++rep) {
    const DenseTensor x = testing::gaussian_tensor(gen, {2, 2, 2});
    const double oracle = grid_norm_2x2x2(x, 1500);
    const auto bracket = spectral_norm_bracket(x, {}, eps);
    CHECK(bracket.upper >= oracle);
    CHECK(bracket.lower <= bracket.upper);
    // Grid oracle is itself a lower bound to about 1e-6.
    CHECK(bracket.lower >= oracle * (1.0 - 1e-9));
    CHECK(bracket.lower <= oracle * (1.0 + 1e-5));
    const auto& cert = bracket.certificate;
    CHECK(cert.net_max <= bracket.lower * (1.0 + 1e-12));
    CHECK(cert.slack == doctest::Approx(net_slack(3, eps).binomial));
    CHECK(cert.upper_bound == doctest::Approx(cert.net_max / (1.0 - cert.slack)));
    CHECK(cert.tuples == enumeration_size(x.shape(), eps));
  }
  const DenseTensor x = testing::gaussian_tensor(gen, {2, 2, 2});
  CHECK_THROWS_AS(certified_upper_bound(x, 0.5), ParameterError);
  CertificateLimits tight;
  tight.enumeration_cap = 10;
  CHECK_THROWS_AS(certified_upper_bound(x, eps, tight), NetTooLarge);
}

TEST_CASE("certificate on a matrix brackets the singular value") {
  std::mt19937_64 gen(47);
  const DenseTensor a = testing::gaussian_tensor(gen, {3, 3});
  const double s = testing::largest_singular_value(a);
  const auto cert = certified_upper_bound(a, 0.2);
  CHECK(cert.net_max <= s * (1.0 + 1e-12));
  CHECK(cert.upper_bound >= s);
}

TEST_CASE("cover of S^2 at K0/3") {
  const double eps = kK0 / 3;
  const auto c = build_sphere_cover(3, eps);
  // A cap of chord radius eps has area fraction (1 - cos theta) / 2 with
  // theta = 2 asin(eps / 2).
  const double theta = 2.0 * std::asin(eps / 2.0);
  CHECK(static_cast<double>(c.size()) >= 2.0 / (1.0 - std::cos(theta)));
  std::mt19937_64 gen(48);
  int misses = 0;
  for (int rep = 0; rep < 10000; ++rep)
    misses += min_distance(c, testing::unit_vector(gen, 3)) > eps;
  CHECK(misses == 0);
}

TEST_CASE("certificate examples") {
  SUBCASE("1x1x1") {
    const DenseTensor x(Shape({1, 1, 1}), {-2.5});
    const auto cert = certified_upper_bound(x, kK0 / 3);
    CHECK(cert.net_max == 2.5);
    CHECK(cert.upper_bound == doctest::Approx(2.5 / (1.0 - net_slack(3, kK0 / 3).binomial)));
  }
  SUBCASE("scaled rank one on 2x2x2") {
    std::mt19937_64 gen(49);
    const auto a = testing::unit_vector(gen, 2), b = testing::unit_vector(gen, 2),
               c = testing::unit_vector(gen, 2);
    auto a4 = a;
    for (double& e : a4) e *= 4.0;
    const auto bracket = spectral_norm_bracket(outer_product({a4, b, c}), {}, kK0 / 3);
    CHECK(bracket.lower == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(bracket.upper >= 4.0);
    CHECK(bracket.upper <= 8.25);
  }
  SUBCASE("2x2 identity") {
    const DenseTensor eye(Shape({2, 2}), {1.0, 0.0, 0.0, 1.0});
    const auto cert = certified_upper_bound(eye, kK0 / 2);
    CHECK(cert.net_max <= 1.0 + 1e-15);
    CHECK(cert.upper_bound >= 1.0);
    CHECK(cert.upper_bound <= 2.0 + 1e-9);
  }
  SUBCASE("zero tensor") {
    const auto bracket = spectral_norm_bracket(DenseTensor::zeros(Shape({2, 2, 2})), {}, kK0 / 3);
    CHECK(bracket.lower == 0.0);
    CHECK(bracket.upper == 0.0);
  }
}

TEST_CASE("superdiagonal tensors have the largest absolute diagonal as norm") {
  std::mt19937_64 gen(50);
  for (int rep = 0; rep < 10; ++rep) {
    const auto d = testing::gaussian_vector(gen, 4);
    std::vector<double> e(64, 0.0);
    for (std::size_t i = 0; i < 4; ++i) e[i * 16 + i * 4 + i] = d[i];
    double expect = 0.0;
    for (double v : d) expect = std::max(expect, std::abs(v));
    CHECK(rel_err(power_iteration(DenseTensor(Shape({4, 4, 4}), e), {}).value, expect) < 1e-12);
  }
}
