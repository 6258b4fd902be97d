#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "dysonrg/interval.hpp"
#include "dysonrg/scalar.hpp"

using dysonrg::Interval;

TEST_CASE("point intervals are exact") {
  const Interval x(1.5);
  CHECK(x.lower() == 1.5);
  CHECK(x.upper() == 1.5);
  CHECK(x.width() == 0.0);
}

TEST_CASE("basic arithmetic encloses the exact result") {
  const Interval a(0.1);
  const Interval b(0.2);
  const Interval sum = a + b;
  CHECK(sum.lower() < 0.1 + 0.2);
  CHECK(sum.upper() > 0.1 + 0.2 - 1e-16);
  CHECK(sum.contains(0.30000000000000004));  // the rounded double sum
  CHECK(sum.width() < 1e-15);

  const Interval prod = Interval(-2.0, 3.0) * Interval(-1.0, 5.0);
  CHECK(prod.lower() <= -10.0);
  CHECK(prod.upper() >= 15.0);
  CHECK(prod.width() < 25.0 + 1e-12);
}

TEST_CASE("division by an interval containing zero is rejected") {
  CHECK_THROWS_AS(Interval(1.0) / Interval(-1.0, 1.0), std::domain_error);
  CHECK_NOTHROW(Interval(1.0) / Interval(0.5, 2.0));
}

TEST_CASE("log rejects nonpositive arguments") {
  CHECK_THROWS_AS(log(Interval(-1.0, 2.0)), std::domain_error);
  CHECK_THROWS_AS(log(Interval(0.0)), std::domain_error);
}

TEST_CASE("abs and max") {
  const Interval x(-3.0, 2.0);
  CHECK(abs(x).lower() == 0.0);
  CHECK(abs(x).upper() == 3.0);
  const Interval m = max(Interval(1.0, 2.0), Interval(0.5, 3.0));
  CHECK(m.lower() == 1.0);
  CHECK(m.upper() == 3.0);
}

TEST_CASE("float results lie inside interval enclosures on random expressions") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-3.0, 3.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double x = dist(rng);
    const double y = dist(rng);
    const double z = std::abs(dist(rng)) + 0.1;

    const double f = std::exp(x * y / z) + std::log(z) - x;
    const Interval fi =
        exp(Interval(x) * Interval(y) / Interval(z)) + log(Interval(z)) - Interval(x);
    CHECK(fi.contains(f));
    CHECK(fi.width() < 1e-10 * (1.0 + std::fabs(f)));
  }
}

TEST_CASE("pairwise sum matches simple sum") {
  std::vector<double> xs;
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double plain = 0.0;
  for (int i = 0; i < 1000; ++i) {
    xs.push_back(dist(rng));
    plain += xs.back();
  }
  CHECK(dysonrg::pairwise_sum(xs) == doctest::Approx(plain).epsilon(1e-12));
}
