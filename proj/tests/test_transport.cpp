#include <doctest.h>

#include <cmath>

#include "tadist/error.hpp"
#include "tadist/transport.hpp"

using namespace tadist;

namespace {

// Y = (0, 3) sampled at 1 and 2.
SpacePtr four_points() { return line_space({0, 1, 2, 3}, {0, 3}); }

}  // namespace

TEST_SUITE("transport") {

TEST_CASE("Wasserstein between Diracs and on the line") {
  const auto s = four_points();
  const auto a = DiscreteMeasure::dirac(s, 1), b = DiscreteMeasure::dirac(s, 2);
  for (double p : {1.0, 2.0, 3.5}) CHECK(wasserstein(a, b, p).value == doctest::Approx(1));

  // Monotone rearrangement: (0.5, 0.5) at {0, 1} -> (0.5, 0.5) at {2, 3}.
  const DiscreteMeasure mu(s, {0.5, 0.5, 0, 0}), nu(s, {0, 0, 0.5, 0.5});
  const auto r = wasserstein(mu, nu, 2);
  CHECK(r.value == doctest::Approx(2));
  CHECK(marginal_error(r.plan, mu.weights(), nu.weights()) < 1e-12);
  CHECK(r.plan.mass() == doctest::Approx(1));
  CHECK(r.plan.cost_value == doctest::Approx(4));
}

TEST_CASE("preconditions") {
  const auto s = four_points();
  const auto a = DiscreteMeasure::dirac(s, 1);
  CHECK_THROWS_AS(wasserstein(a, a.scaled(0.5), 1), MassError);
  CHECK_THROWS_AS(wasserstein(a, a, 0.5), DomainError);
  CHECK_THROWS_AS(wasserstein(a, a, INFINITY), DomainError);
  CHECK_THROWS_AS(wasserstein(a, DiscreteMeasure::dirac(four_points(), 1), 1),
                  ConfigError);
  CHECK_THROWS_AS(w_prime(a.scaled(2), a, 1), MassError);
}

TEST_CASE("boundary-based distances") {
  const auto s = four_points();
  const auto a = DiscreteMeasure::dirac(s, 1), b = DiscreteMeasure::dirac(s, 2);
  CHECK(w_star(a, b, 1).value == doctest::Approx(3));
  CHECK(annihilation_cost(a, 1) == doctest::Approx(1));
  CHECK(annihilation_cost(a, 2) == doctest::Approx(1));
  CHECK(w_dagger(a, b, 1).value == doctest::Approx(2));
  CHECK(w_prime(a, b, 1).value == doctest::Approx(1));
  CHECK(w_prime_zero(a.scaled(0.5), 1) == doctest::Approx(0.5));
  CHECK(w_prime_zero(a.scaled(0.5), 2) == doctest::Approx(std::sqrt(0.5)));
  CHECK(w_prime(a.scaled(0.5), DiscreteMeasure::zero(s), 2).value ==
        doctest::Approx(std::sqrt(0.5)));
  // Moving costs 1, destroy + create costs 2 at p = 1.
  CHECK(w_doubleprime(a, b, 1).value == doctest::Approx(1));
  CHECK(w_doubleprime(a, DiscreteMeasure::zero(s), 2).value == doctest::Approx(1));
}

TEST_CASE("dagger closed form matches its LP") {
  const auto s = line_space({0, 0.3, 1.1, 1.7, 2.0, 4.0}, {0, 5});
  const DiscreteMeasure mu(s, {0, 0.2, 0.3, 0.1, 0.4, 0});
  const DiscreteMeasure nu(s, {0, 0.5, 0.1, 0.1, 0.3, 0});
  CHECK(w_dagger(mu, nu, 1).value ==
        doctest::Approx(w_dagger_lp(mu, nu, 1).value).epsilon(1e-10));
  CHECK(w_dagger(mu, nu, 2).value ==
        doctest::Approx(w_dagger_lp(mu, nu, 2).value).epsilon(1e-10));
}

TEST_CASE("ordering W' <= W and W' <= W* on equal masses") {
  const auto s = line_space({0, 0.3, 1.1, 1.7, 2.0, 4.0}, {0, 5});
  const DiscreteMeasure mu(s, {0, 0.2, 0.3, 0.1, 0.4, 0});
  const DiscreteMeasure nu(s, {0, 0.5, 0.1, 0.1, 0.3, 0});
  for (double p : {1.0, 2.0}) {
    const double wp = w_prime(mu, nu, p).value;
    CHECK(wp <= wasserstein(mu, nu, p).value + 1e-12);
    CHECK(wp <= w_star(mu, nu, p).value + 1e-12);
    CHECK(wp <= w_doubleprime(mu, nu, p).value + 1e-12);
  }
}

}
