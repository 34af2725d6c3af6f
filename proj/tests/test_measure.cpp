#include <doctest.h>

#include "tadist/error.hpp"
#include "tadist/measure.hpp"

using namespace tadist;

TEST_SUITE("measure") {

TEST_CASE("mass, support, arithmetic") {
  const auto s = line_space({0, 1, 2, 3}, {0, 3});
  const DiscreteMeasure mu(s, {0, 0.25, 0.5, 0});
  CHECK(mu.mass() == doctest::Approx(0.75));
  CHECK(mu.support() == std::vector<std::size_t>{1, 2});
  CHECK(mu.scaled(2).mass() == doctest::Approx(1.5));
  const auto d = DiscreteMeasure::dirac(s, 2, 0.1);
  CHECK((mu + d)[2] == doctest::Approx(0.6));
  CHECK(DiscreteMeasure::zero(s).mass() == 0.0);
  CHECK_THROWS_AS(mu.scaled(-1), DomainError);
  CHECK_THROWS_AS(DiscreteMeasure::dirac(s, 9), ConfigError);
}

TEST_CASE("construction checks") {
  const auto s = line_space({0, 1, 2}, {0});
  CHECK_THROWS_AS(DiscreteMeasure(s, {1, 2}), ConfigError);
  CHECK_THROWS_AS(DiscreteMeasure(s, {0, -0.5, 0}), ConfigError);
  CHECK_THROWS_AS(DiscreteMeasure(s, {0, NAN, 0}), ConfigError);
  // Round-off below zero is clamped, not rejected.
  CHECK(DiscreteMeasure(s, {0, -1e-14, 0})[1] == 0.0);
  CHECK(SignedMeasure(s, {1, -2, 0.5}).mass() == doctest::Approx(-0.5));
}

TEST_CASE("preconditions") {
  const auto s = line_space({0, 1, 2}, {0});
  const auto t = line_space({0, 1, 2}, {0});
  const DiscreteMeasure a(s, {0, 0.5, 0.5});
  const DiscreteMeasure b(t, {0, 0.5, 0.5});
  CHECK_NOTHROW(require_same_space(a.space(), a.space()));
  CHECK_THROWS_AS(require_same_space(a.space(), b.space()), ConfigError);
  CHECK_NOTHROW(require_subprobability(a, true));
  CHECK_THROWS_AS(require_subprobability(a.scaled(1.5), false), MassError);
  CHECK_THROWS_AS(require_subprobability(DiscreteMeasure(s, {0.1, 0, 0}), true),
                  MassError);
  CHECK_NOTHROW(require_subprobability(DiscreteMeasure(s, {0.1, 0, 0}), false));
  CHECK_THROWS_AS(require_equal_mass(a, a.scaled(0.5)), MassError);
}

}
