#include <cmath>
#include <random>

#include "doctest.h"
#include "relaxrk/root_finding.hpp"

using namespace relaxrk;

TEST_SUITE("root_finding") {
  TEST_CASE("brent finds simple roots") {
    auto f = [](double x) { return x * x - 2.0; };
    const auto r = brent(f, 0.0, 2.0, f(0.0), f(2.0), 1e-15);
    CHECK(r.x == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
    CHECK(r.iterations < 20);
    CHECK(r.fx * r.fx_other <= 0.0);
  }

  TEST_CASE("brent agrees with a 200-iteration bisection oracle") {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> shift(0.8, 1.2);
    std::uniform_real_distribution<double> curv(0.1, 5.0);
    for (int trial = 0; trial < 100; ++trial) {
      const double root = shift(rng);
      const double a2 = curv(rng);
      auto f = [&](double x) { return (x - root) * (1.0 + a2 * x * x); };
      const auto b = brent(f, 0.5, 1.5, f(0.5), f(1.5), 1e-15);
      const auto o = bisection(f, 0.5, 1.5, f(0.5), f(1.5), 0.0, 200);
      CHECK(std::abs(b.x - o.x) < 1e-12);
      CHECK(std::abs(b.x - root) < 1e-12);
    }
  }

  TEST_CASE("planted root near 1.05") {
    auto f = [](double g) { return g * (g - 1.05); };
    const auto b = brent(f, 0.9, 1.2, f(0.9), f(1.2), 1e-15);
    const auto o = bisection(f, 0.9, 1.2, f(0.9), f(1.2), 0.0, 200);
    CHECK(b.x == doctest::Approx(1.05).epsilon(1e-14));
    CHECK(std::abs(b.x - o.x) < 1e-12);
  }

  TEST_CASE("nonpositive side selection") {
    auto f = [](double x) { return x - 0.3; };
    const auto r = bisection(f, 0.0, 1.0, f(0.0), f(1.0));
    CHECK(r.value_at_nonpositive_side() <= 0.0);
    CHECK(r.nonpositive_side() <= 0.3);
    CHECK(r.nonpositive_side() == doctest::Approx(0.3).epsilon(1e-15));
  }

  TEST_CASE("exact zero at an endpoint") {
    auto f = [](double x) { return x - 1.0; };
    const auto r = brent(f, 1.0, 2.0, 0.0, 1.0, 1e-15);
    CHECK(r.x == 1.0);
    CHECK(r.fx == 0.0);
  }
}
