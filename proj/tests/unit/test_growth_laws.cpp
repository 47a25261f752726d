#include <doctest.h>

#include "ablab/errors.hpp"
#include "ablab/growth_law.hpp"
#include "support/generators.hpp"

using ablab::GrowthLaw;
using doctest::Approx;

TEST_SUITE("growth_laws") {

TEST_CASE("evaluation") {
  const auto z = GrowthLaw::zero(3.0);
  CHECK(z.g(0.0) == 0.0);
  CHECK(z.g(2.5) == 0.0);
  CHECK(z.g_prime(1.0) == 0.0);
  const auto lin = GrowthLaw::linear(1.0, 2.0);
  CHECK(lin.g(0.5) == Approx(1.5));
  CHECK(lin.g(2.0) == 0.0);
  CHECK(lin.g_prime(1.0) == Approx(-1.0));
}

TEST_CASE("range checks and round-off tolerance") {
  const auto lin = GrowthLaw::linear(2.0, 1.0);
  CHECK_THROWS_AS(lin.g(-0.01), ablab::RangeError);
  CHECK_THROWS_AS(lin.g(1.01), ablab::RangeError);
  CHECK(lin.g(1.0 + 5e-10) == 0.0);
  // The solver continues past p_M by the tangent.
  CHECK(lin.g_extended(1.1) == Approx(-0.2));
}

TEST_CASE("invalid laws are rejected") {
  CHECK_THROWS(GrowthLaw::linear(-1.0, 1.0));
  CHECK_THROWS(GrowthLaw::linear(1.0, 0.0));
  CHECK_THROWS(GrowthLaw::tabulated({0.0, 0.5, 1.0}, {1.0, 1.2, 0.0}));  // not decreasing
  CHECK_THROWS(GrowthLaw::tabulated({0.0, 0.5, 1.0}, {1.0, 0.5, 0.1}));  // G(p_M) != 0
}

TEST_CASE("property: monotone decrease") {
  gen::Source s(21);
  const auto tab = GrowthLaw::tabulated({0.0, 0.3, 0.6, 1.0}, {2.0, 1.1, 0.4, 0.0});
  for (int k = 0; k < 100; ++k) {
    const auto lin = GrowthLaw::linear(s.log_uniform(0.1, 10.0), 1.0);
    double a = s.uniform(0.0, 1.0), b = s.uniform(0.0, 1.0);
    if (a > b) std::swap(a, b);
    CHECK(lin.g(a) >= lin.g(b));
    CHECK(tab.g(a) >= tab.g(b));
    CHECK(tab.g_prime(a) <= 0.0);
    CHECK(lin.g(a) >= 0.0);
  }
}

}  // TEST_SUITE
