#include <doctest.h>

#include <random>

#include "tnorm/bounds.hpp"
#include "tnorm/errors.hpp"

using namespace tnorm;

namespace {

// Reference values computed with 50-digit arithmetic.
constexpr double kK0Ref = 0.405465108108164381978013115464;

BoundParams params(std::vector<std::size_t> dims, double sigma, double delta,
                   std::optional<std::size_t> m = std::nullopt) {
  return {Shape(std::move(dims)), sigma, delta, m};
}

bool has_flag(const BoundReport& r, std::string_view needle) {
  for (const auto& f : r.validity_flags)
    if (f.find(needle) != std::string::npos) return true;
  return false;
}

}  // namespace

TEST_CASE("K0") { CHECK(kK0 == kK0Ref); }

TEST_CASE("hoeffding tail") {
  const auto t0 = hoeffding_tail(0.0, 1.0);
  CHECK(t0.uncapped == 2.0);
  CHECK(t0.capped == 1.0);
  CHECK(hoeffding_tail(2.0, 1.0).capped == doctest::Approx(0.27067056647322538).epsilon(1e-15));
  CHECK(hoeffding_tail(2.0, 2.0).capped > hoeffding_tail(2.0, 1.0).capped);
  CHECK(hoeffding_tail(40.0, 1.0).log_value == doctest::Approx(std::log(2.0) - 800.0));
  CHECK_THROWS_AS(hoeffding_tail(-1.0, 1.0), ParameterError);
  CHECK_THROWS_AS(hoeffding_tail(1.0, 0.0), ParameterError);
}

TEST_CASE("theorem 1") {
  const auto r = theorem1_bound(params({10, 10, 10}, 1.0, 0.05));
  CHECK(r.valid());
  CHECK(r.value == doctest::Approx(26.003580861487825).epsilon(1e-14));
  CHECK(r.log_value == doctest::Approx(std::log(r.value)));
  CHECK(theorem1_bound(params({10, 10, 10}, 2.0, 0.05)).value == 2.0 * r.value);
  CHECK(has_flag(theorem1_bound(params({10, 10, 10}, 1.0, 2.0)), "delta out of range"));
  CHECK_THROWS_AS(theorem1_bound(params({10, 10, 10}, 0.0, 0.05)), ParameterError);
  CHECK_THROWS_AS(theorem1_bound({Shape{}, 1.0, 0.05, std::nullopt}), ParameterError);
}

TEST_CASE("corollary 1") {
  const auto r = corollary1_bound(params({10, 10, 10}, 1.0, 0.05, 64));
  CHECK(r.valid());
  CHECK(r.value == doctest::Approx(417.75978401048892).epsilon(1e-14));
  const auto r4 = corollary1_bound(params({10, 10, 10}, 1.0, 0.05, 256));
  CHECK(r4.value == doctest::Approx(2.0 * r.value).epsilon(1e-15));
  // 2 ln(2 / 0.05) = 7.3778 separates M = 7 from M = 8.
  CHECK(has_flag(corollary1_bound(params({10, 10, 10}, 1.0, 0.05, 1)), "M below 2ln(2/delta)"));
  CHECK(has_flag(corollary1_bound(params({10, 10, 10}, 1.0, 0.05, 7)), "M below"));
  CHECK(corollary1_bound(params({10, 10, 10}, 1.0, 0.05, 8)).valid());
  CHECK_THROWS(corollary1_bound(params({10, 10, 10}, 1.0, 0.05)));
}

TEST_CASE("corollary 2 shares the theorem 1 closed form") {
  const auto p = params({4, 4, 4}, 1.0, 0.1);
  const auto r = corollary2_bound(p);
  CHECK(r.formula == FormulaId::corollary2);
  CHECK(r.value == theorem1_bound(p).value);
  CHECK(r.value == doctest::Approx(16.811779530532801).epsilon(1e-14));
  CHECK_THROWS_AS(corollary2_bound(params({4, 4, 4}, 0.0, 0.1)), ParameterError);
}

TEST_CASE("net slack") {
  for (std::size_t k = 1; k <= 8; ++k)
    CHECK(net_slack(k, kK0 / static_cast<double>(k)).exponential == doctest::Approx(0.5).epsilon(1e-15));
  const auto s3 = net_slack(3, kK0 / 3);
  CHECK(s3.binomial == doctest::Approx(0.46273462073953381).epsilon(1e-14));
  CHECK(1.0 / (1.0 - s3.binomial) == doctest::Approx(1.8612775708281775).epsilon(1e-14));
  const auto s1 = net_slack(1, 0.25);
  CHECK(s1.binomial == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(s1.exponential == doctest::Approx(0.28402541668774148).epsilon(1e-15));
  CHECK(net_slack(2, kK0 / 2).binomial == doctest::Approx(0.44656559658145574).epsilon(1e-14));
  CHECK_THROWS_AS(net_slack(0, 0.1), ParameterError);
  CHECK_THROWS_AS(net_slack(3, 0.0), ParameterError);
}

TEST_CASE("cover count") {
  CHECK(cover_count_bound(1, 1.0).value == 2.0);
  const auto c = cover_count_bound(10, kK0 / 2);
  CHECK(c.log_value == doctest::Approx(22.890148168377706).epsilon(1e-14));
  CHECK(std::pow(c.value, 0.1) == doctest::Approx(9.8652138495057267).epsilon(1e-13));
  CHECK(std::isinf(cover_count_bound(5000, 0.01).value));
  CHECK(cover_count_bound(5000, 0.01).log_value == doctest::Approx(5000 * std::log(200.0)));
  CHECK_THROWS_AS(cover_count_bound(0, 0.5), ParameterError);
  CHECK_THROWS_AS(cover_count_bound(3, 1.5), ParameterError);
}

TEST_CASE("union tail") {
  const auto p = params({3, 4, 5}, 1.0, 0.05);
  CHECK(union_tail(p, 0.0).uncapped >= 1.0);
  CHECK(union_tail(p, 0.0).capped == 1.0);
  double prev = INFINITY;
  for (double t = 0.0; t < 60.0; t += 2.5) {
    const double v = union_tail(p, t).log_value;
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(union_tail(p, -1.0), ParameterError);
}

// Properties over seeded random parameter sets.
TEST_CASE("bound identities on random parameters") {
  std::mt19937_64 gen(51);
  std::uniform_int_distribution<std::size_t> order_dist(1, 6), dim_dist(1, 200), m_dist(1, 500);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<std::size_t> dims(order_dist(gen));
    for (auto& d : dims) d = dim_dist(gen);
    const double sigma = std::exp(4.0 * unit(gen) - 2.0);
    const double delta = std::exp(-10.0 * unit(gen)) * 0.999;
    const std::size_t k = dims.size();
    auto p = params(dims, sigma, delta);

    // Union bound at the theorem 1 radius equals delta.
    const double t = theorem1_bound(p).value;
    CHECK(std::abs(union_tail(p, t).log_value - std::log(delta)) <= 1e-10 * std::abs(std::log(delta)));

    // Product of per-mode cover counts at K0/K is (2K/K0)^{sum n}.
    double log_covers = 0.0;
    for (auto n : dims) log_covers += cover_count_bound(n, kK0 / static_cast<double>(k)).log_value;
    const double expect = static_cast<double>(p.shape.sum_dims()) * std::log(2.0 * k / kK0);
    CHECK(std::abs(log_covers - expect) <= 1e-12 * expect);

    // Binomial slack never exceeds the exponential one.
    const double eps = unit(gen) * 0.999 + 1e-6;
    const auto s = net_slack(k, eps);
    CHECK(s.binomial <= s.exponential * (1.0 + 1e-15));
    CHECK(s.exponential == doctest::Approx(std::expm1(eps * static_cast<double>(k))));

    // Corollary 1 scales as sqrt(M) and sigma.
    p.measurements = m_dist(gen);
    const auto c1 = corollary1_bound(p);
    p.measurements = *p.measurements * 4;
    CHECK(corollary1_bound(p).value == doctest::Approx(2.0 * c1.value).epsilon(1e-14));
  }
}

TEST_CASE("reports serialize their inputs") {
  const auto r = theorem1_bound(params({2, 3}, 1.5, 0.1));
  const auto j = to_json(r);
  CHECK(j["formula_id"] == "theorem1");
  CHECK(j["inputs"]["sigma"] == 1.5);
  CHECK(j["validity_flags"].empty());
  CHECK(parse_formula_id("corollary1") == FormulaId::corollary1);
  CHECK_THROWS(parse_formula_id("lemma9"));
}
