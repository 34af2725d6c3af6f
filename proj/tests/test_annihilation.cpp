#include <doctest.h>

#include <cmath>

#include "tadist/annihilation.hpp"
#include "tadist/error.hpp"

using namespace tadist;

namespace {

// Y = (-3, 3) sampled at -2, 0, 2.
SpacePtr pair_line() { return line_space({-3, -2, 0, 2, 3}, {0, 4}); }

SpacePtr scattered() {
  return line_space({0, 0.3, 0.7, 1.1, 1.6, 2.0, 2.2, 3.0}, {0, 7});
}

}  // namespace

TEST_SUITE("annihilation") {

TEST_CASE("irreducible edges of a line are the neighbours") {
  const auto e = irreducible_edges(*scattered());
  REQUIRE(e.size() == 7);
  for (std::size_t i = 0; i < e.size(); ++i) {
    CHECK(e[i].first == i);
    CHECK(e[i].second == i + 1);
  }
}

TEST_CASE("Diracs deep inside cannot annihilate") {
  const auto s = pair_line();
  const auto a = DiscreteMeasure::dirac(s, 1), b = DiscreteMeasure::dirac(s, 3);
  const auto z = DiscreteMeasure::zero(s);
  for (double p : {1.0, 2.0}) {
    CHECK(w0(a, b, p).value == doctest::Approx(4).epsilon(1e-9));
    CHECK(w0(a, z, p).value == doctest::Approx(1).epsilon(1e-9));
    CHECK(w_prime(a, b, p).value == doctest::Approx(2));
  }
  CHECK(w0(z, z, 2).value == doctest::Approx(0));
}

TEST_CASE("formulations agree") {
  const auto s = scattered();
  const DiscreteMeasure mu(s, {0, 0.3, 0, 0.2, 0, 0.1, 0, 0});
  const DiscreteMeasure nu(s, {0, 0, 0.25, 0, 0.05, 0, 0.3, 0});
  const double edge = w0(mu, nu, 1, {W0Formulation::kEdgeFlow}).value;
  const double coupling = w0(mu, nu, 1, {W0Formulation::kCoupling}).value;
  CHECK(edge == doctest::Approx(coupling).epsilon(1e-9));
  W0Options eq;
  eq.mass_equality = true;
  CHECK(w0(mu, nu, 1, eq).value == doctest::Approx(edge).epsilon(1e-9));
  CHECK(w0_rep_p1(mu, nu) == doctest::Approx(edge).epsilon(1e-9));
  CHECK(w0_nine_term(mu, nu, 1).value == doctest::Approx(edge).epsilon(1e-9));

  const double two = w0(mu, nu, 2).value;
  CHECK(w0_nine_term(mu, nu, 2).value == doctest::Approx(two).epsilon(1e-9));
  CHECK(w0_upper_rep(mu, nu, 2) >= two - 1e-9);
  CHECK(w_prime(mu, nu, 1).value <= two + 1e-9);
}

TEST_CASE("witness is consistent") {
  const auto s = scattered();
  const DiscreteMeasure mu(s, {0, 0.3, 0, 0.2, 0, 0.1, 0, 0});
  const DiscreteMeasure nu(s, {0, 0, 0.25, 0, 0.05, 0, 0.3, 0});
  const W0Solver solver(s, 2);
  const auto r = solver.solve(mu, nu);
  const auto& w = r.witness;
  CHECK((mu.mass() + 2 * w.rho.mass()) <= 1 + 1e-9);
  CHECK((nu.mass() + 2 * w.eta.mass()) <= 1 + 1e-9);
  CHECK(w.plan.mass() == doctest::Approx(mu.mass() + 2 * w.rho.mass()));
  CHECK(std::pow(w.plan.cost_value, 0.5) == doctest::Approx(r.value).epsilon(1e-9));
}

TEST_CASE("nine-term objective rejects a bad decomposition") {
  const auto s = scattered();
  const DiscreteMeasure mu(s, {0, 0.3, 0, 0.2, 0, 0.1, 0, 0});
  const DiscreteMeasure nu(s, {0, 0, 0.25, 0, 0.05, 0, 0.3, 0});
  auto dec = w0_nine_term(mu, nu, 1).decomposition;
  CHECK_NOTHROW(nine_term_objective(mu, nu, 1, dec));
  dec.blocks[0](1, 2) += 0.5;
  CHECK_THROWS_AS(nine_term_objective(mu, nu, 1, dec), MassError);
  CHECK(nine_term_uses_star(2));
  CHECK_FALSE(nine_term_uses_star(0));
}

TEST_CASE("sharp and flat bounds bracket correctly") {
  const auto s = scattered();
  const DiscreteMeasure mu(s, {0, 0.3, 0, 0.2, 0, 0.1, 0, 0});
  const DiscreteMeasure nu(s, {0, 0, 0.25, 0, 0.05, 0, 0.3, 0});
  const auto b = w_sharp_bounds(mu, nu, 2);
  CHECK(b.lower <= b.upper + 1e-12);
  const auto b1 = w_sharp_bounds(mu, nu, 1);
  CHECK(b1.lower == doctest::Approx(b1.upper));

  const auto direct = w_flat_upper(mu, nu, 1, FlatStrategy::kDirect);
  const auto chain = w_flat_upper(mu, nu, 1, FlatStrategy::kBoundaryAnnihilation, 16);
  CHECK(direct.value == doctest::Approx(w0(mu, nu, 1).value).epsilon(1e-9));
  CHECK(chain.value <= direct.value + 1e-9);
  CHECK(chain.value >= w_prime(mu, nu, 1).value - 1e-9);
}

TEST_CASE("boundary chain routes shortcut pairs through Z") {
  // W0 cannot annihilate unit Diracs, but a chain that first empties into Z
  // and then refills from Z reaches d' = 2.
  const auto s = pair_line();
  const auto a = DiscreteMeasure::dirac(s, 1), b = DiscreteMeasure::dirac(s, 3);
  const auto r = w_flat_upper(a, b, 1, FlatStrategy::kBoundaryAnnihilation, 8);
  CHECK(r.value == doctest::Approx(2).epsilon(1e-9));
  CHECK(r.best == FlatStrategy::kBoundaryAnnihilation);
}

TEST_CASE("upper estimate and vague convergence") {
  const auto s = pair_line();
  const auto a = DiscreteMeasure::dirac(s, 1);
  const auto z = DiscreteMeasure::zero(s);
  CHECK(w0_upper_estimate(a, z, 0) == doctest::Approx(1));
  CHECK(w0_upper_estimate(a, z, 0) >= w0(a, z, 1).value - 1e-9);

  std::vector<DiscreteMeasure> seq;
  for (int n = 1; n <= 4; ++n) seq.push_back(a.scaled(1.0 / n));
  const auto rep = vague_convergence_probe(seq, z, 1);
  REQUIRE(rep.rows.size() == 4);
  CHECK(rep.monotone_decay);
  CHECK(rep.rows.back().distance == doctest::Approx(0.25));
}

TEST_CASE("domain checks") {
  const auto s = pair_line();
  const auto a = DiscreteMeasure::dirac(s, 1);
  CHECK_THROWS_AS(w0(a, a, 0.9), DomainError);
  CHECK_THROWS_AS(w0(DiscreteMeasure::dirac(s, 0), a, 1), MassError);
  CHECK_THROWS_AS(w0(a, a, 2, {W0Formulation::kEdgeFlow}), DomainError);
}

}
