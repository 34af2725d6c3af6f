#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "tadist/measure.hpp"

namespace tadist {

struct PlanEntry {
  std::size_t from = 0;
  std::size_t to = 0;
  double mass = 0.0;
};

/// A coupling stored as its nonzero entries.
///
/// rows/cols list the supports that took part in the problem; indices refer
/// to the points of the underlying space (or to a virtual boundary node at
/// index n for the boundary-extended distances).
struct TransportPlan {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  std::vector<PlanEntry> entries;
  /// sum cost(i,j)^p q(i,j), before taking the p-th root.
  double cost_value = 0.0;
  double p = 1.0;

  double mass() const;
  /// Row and column sums as dense vectors of the given length.
  std::vector<double> source_marginal(std::size_t n) const;
  std::vector<double> target_marginal(std::size_t n) const;
};

struct TransportResult {
  double value = 0.0;
  TransportPlan plan;
};

/// Largest marginal violation of a plan relative to max(1, mass).
double marginal_error(const TransportPlan& plan, std::span<const double> source,
                      std::span<const double> target);

/// Exact L^p Kantorovich problem for the cost matrix (indexed by points).
TransportResult wasserstein(const Eigen::MatrixXd& cost,
                            const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu, double p);

/// wasserstein() with cost = the space's own distance.
TransportResult wasserstein(const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu, double p);

/// Transport for the meta-metric d*.
TransportResult w_star(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                       double p);

/// Half the self-transport cost of mu under d*.
double annihilation_cost(const DiscreteMeasure& mu, double p);

/// Transport for d^dagger. At p = 1 the cost separates and the closed form
/// is returned (the plan is then the product coupling).
TransportResult w_dagger(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         double p);
/// The full LP for d^dagger regardless of p (used to cross-check p = 1).
TransportResult w_dagger_lp(const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu, double p);

/// Shortcut-metric distance between subprobabilities, after topping both up
/// to mass one with an atom at the virtual boundary node (index n).
TransportResult w_prime(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                        double p);

/// W'_p(mu, 0) = (sum d'(x, boundary)^p mu(x))^(1/p).
double w_prime_zero(const DiscreteMeasure& mu, double p);

/// Distance where mass is freely created or destroyed at the boundary at
/// cost d'(., boundary)^p per unit, and moved at cost d'^p.
TransportResult w_doubleprime(const DiscreteMeasure& mu,
                              const DiscreteMeasure& nu, double p);

/// Throws DomainError unless p >= 1 and finite.
void require_exponent(double p);

}  // namespace tadist
