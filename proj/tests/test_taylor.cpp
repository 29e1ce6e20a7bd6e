#include "doctest.h"
#include "newtonpoly/rational.hpp"
#include "newtonpoly/taylor.hpp"
#include "support.hpp"

#include <random>

using namespace npoly;
using testsupport::x;

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3") == 3);
  CHECK(parse_rational("-7/21") == Rational(-1, 3));
  CHECK(to_string(parse_rational("4/6")) == "2/3");
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("1/-2"), std::invalid_argument);
}

TEST_CASE("multi-index rejects negative exponents") {
  CHECK_THROWS_AS(MultiIndex({1, -1}), std::invalid_argument);
  CHECK_THROWS_AS(x(2, 0) + x(3, 0), DimensionMismatch);
}

TEST_CASE("evaluate examples") {
  const auto x1 = x(2, 0), x2 = x(2, 1);
  const auto p = x1 * x1 + x2 * x2;
  CHECK(p.evaluate(std::vector<Rational>{0, 0}) == 0);
  CHECK(p.evaluate(std::vector<Rational>{1, 2}) == 5);
  CHECK((x1 * x1 * x2 * x2).evaluate(std::vector<Rational>{Rational(1, 2), Rational(1, 2)}) == Rational(1, 16));
  CHECK(p.evaluate(std::vector<double>{1.5, 2.0}) == doctest::Approx(6.25));
  CHECK_THROWS_AS(p.evaluate(std::vector<Rational>{1}), DimensionMismatch);
}

TEST_CASE("partial derivative examples") {
  const auto x1 = x(2, 0), x2 = x(2, 1);
  CHECK(x1.pow(3).partial(0, 2) == x1 * Rational(6));
  CHECK((x1 * x1 * x2 * x2).partial(1) == x1 * x1 * x2 * Rational(2));
  CHECK((x1 * x1 + x2 * x2).partial(0, 3).is_zero());
}

TEST_CASE("build_H examples") {
  const auto x1 = x(2, 0), x2 = x(2, 1);
  CHECK(build_H(x1 * x1 + x2 * x2, {{0, 0}}) == x1 * x1 + x2 * x2);
  CHECK(build_H(x1 * x1 + x1 * Rational(3) + TaylorPoly::constant(2, 7), {{0, 0}}) == x1 * x1);
  CHECK(build_H(x1 * x1, {{1, 0}}) == x1 * x1);
  CHECK_THROWS_AS(build_H(x1, {{1, 2, 3}}), DimensionMismatch);
}

TEST_CASE("directional derivative examples") {
  const auto x1 = x(2, 0), x2 = x(2, 1);
  CHECK(directional_derivative(x1 * x2, std::vector<Rational>{1, 0}, 1) == x2);
  CHECK(directional_derivative(x1 * x1 + x2 * x2, std::vector<Rational>{1, 1}, 2) == TaylorPoly::constant(2, 4));
  CHECK(directional_derivative(x1.pow(3) * x2, std::vector<Rational>{0, 0}, 1).is_zero());
}

TEST_CASE("build_H leaves no constant or linear terms") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> num(-6, 6);
  for (int i = 0; i < 25; ++i) {
    const std::size_t n = 1 + static_cast<std::size_t>(i % 3);
    auto g = testsupport::random_sparse(rng, n, 4, 4) + TaylorPoly::constant(n, num(rng)) + x(n, 0) * num(rng);
    BasePoint z;
    for (std::size_t j = 0; j < n; ++j) z.z.push_back(Rational(num(rng), 1 + (i % 4)));
    const auto H = build_H(g, z);
    CHECK((H.is_zero() || H.order_at_origin() >= 2));
  }
}

TEST_CASE("partials commute and evaluation is additive") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> num(-9, 9);
  for (int i = 0; i < 25; ++i) {
    const auto p = testsupport::random_sparse(rng, 3, 6, 4);
    const auto q = testsupport::random_sparse(rng, 3, 5, 4);
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = 0; b < 3; ++b) CHECK(p.partial(a).partial(b) == p.partial(b).partial(a));
    std::vector<Rational> pt{Rational(num(rng), 7), Rational(num(rng), 5), Rational(num(rng), 3)};
    CHECK((p + q).evaluate(pt) == p.evaluate(pt) + q.evaluate(pt));
    CHECK((p * q).evaluate(pt) == p.evaluate(pt) * q.evaluate(pt));
  }
}

TEST_CASE("hessian gauge of a sum of squares") {
  const auto x1 = x(2, 0), x2 = x(2, 1);
  CHECK(hessian_gauge_fourth_power(x1 * x1 + x2 * x2) == (x1.pow(4) + x2.pow(4)) * Rational(4));
}

TEST_CASE("printing") {
  const auto x1 = x(2, 0), x2 = x(2, 1);
  CHECK(to_string(x1 * x1 - x2 * Rational(1, 2)) != "");
  CHECK(to_string(TaylorPoly(2)) == "0");
}
