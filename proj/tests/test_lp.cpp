#include <doctest.h>

#include <random>

#include "tadist/lp/network_simplex.hpp"
#include "tadist/lp/revised_simplex.hpp"

using namespace tadist::lp;

TEST_SUITE("lp") {

TEST_CASE("revised simplex: textbook problem") {
  // max 3x + 5y s.t. x <= 4, 2y <= 12, 3x + 2y <= 18  ->  36 at (2, 6)
  LinearProgram lp;
  const int r0 = lp.add_row(Sense::kLessEqual, 4);
  const int r1 = lp.add_row(Sense::kLessEqual, 12);
  const int r2 = lp.add_row(Sense::kLessEqual, 18);
  lp.add_column(-3, {{r0, 1.0}, {r2, 3.0}});
  lp.add_column(-5, {{r1, 2.0}, {r2, 2.0}});
  const auto sol = solve(lp);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.objective == doctest::Approx(-36));
  CHECK(sol.x[0] == doctest::Approx(2));
  CHECK(sol.x[1] == doctest::Approx(6));
  // Dual feasibility: c - A^T y >= 0.
  CHECK(-3 - (sol.row_duals[r0] + 3 * sol.row_duals[r2]) >= -1e-9);
  CHECK(-5 - (2 * sol.row_duals[r1] + 2 * sol.row_duals[r2]) >= -1e-9);
}

TEST_CASE("revised simplex: equality and >= rows, infeasible, unbounded") {
  LinearProgram lp;
  const int e = lp.add_row(Sense::kEqual, 1);
  const int g = lp.add_row(Sense::kGreaterEqual, 0.25);
  lp.add_column(1, {{e, 1.0}, {g, 1.0}});
  lp.add_column(2, {{e, 1.0}});
  const auto sol = solve(lp);
  REQUIRE(sol.status == LpStatus::kOptimal);
  CHECK(sol.objective == doctest::Approx(1));

  LinearProgram bad;
  const int r = bad.add_row(Sense::kLessEqual, -1);
  bad.add_column(1, {{r, 1.0}});
  CHECK(solve(bad).status == LpStatus::kInfeasible);

  LinearProgram open;
  const int q = open.add_row(Sense::kGreaterEqual, 1);
  open.add_column(-1, {{q, 1.0}});
  CHECK(solve(open).status == LpStatus::kUnbounded);
}

TEST_CASE("network simplex agrees with the revised simplex on random transport") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const int m = 6, n = 7;
    std::vector<double> a(m), b(n), cost(m * n);
    double sa = 0, sb = 0;
    for (auto& v : a) sa += (v = u(rng));
    for (auto& v : b) sb += (v = u(rng));
    for (auto& v : a) v /= sa;
    for (auto& v : b) v /= sb;
    for (auto& c : cost) c = u(rng);

    NetworkSimplex ns(m + n);
    for (int i = 0; i < m; ++i) ns.set_supply(i, a[i]);
    for (int j = 0; j < n; ++j) ns.set_supply(m + j, -b[j]);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j) ns.add_arc(i, m + j, cost[i * n + j]);
    REQUIRE(ns.run() == NetworkSimplex::Status::kOptimal);

    LinearProgram lp;
    for (int i = 0; i < m; ++i) lp.add_row(Sense::kEqual, a[i]);
    for (int j = 0; j < n; ++j) lp.add_row(Sense::kEqual, b[j]);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        lp.add_column(cost[i * n + j], {{i, 1.0}, {m + j, 1.0}});
    const auto sol = solve(lp);
    REQUIRE(sol.status == LpStatus::kOptimal);
    CHECK(ns.total_cost() == doctest::Approx(sol.objective).epsilon(1e-10));

    // Reduced costs are nonnegative at the network optimum.
    for (std::size_t k = 0; k < ns.arc_count(); ++k) {
      const int i = static_cast<int>(k) / n, j = static_cast<int>(k) % n;
      CHECK(cost[k] - (ns.potential(m + j) - ns.potential(i)) >= -1e-9);
    }
  }
}

TEST_CASE("network simplex: capacities and infeasibility") {
  NetworkSimplex ns(3);
  ns.set_supply(0, 1);
  ns.set_supply(2, -1);
  ns.add_arc(0, 2, 10, 0.5);
  ns.add_arc(0, 1, 1);
  ns.add_arc(1, 2, 1);
  REQUIRE(ns.run() == NetworkSimplex::Status::kOptimal);
  CHECK(ns.total_cost() == doctest::Approx(2));

  NetworkSimplex cut(2);
  cut.set_supply(0, 1);
  cut.set_supply(1, -1);
  cut.add_arc(0, 1, 1, 0.5);
  CHECK(cut.run() == NetworkSimplex::Status::kInfeasible);
}

}
