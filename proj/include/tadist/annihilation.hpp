#pragma once

#include <string>
#include <vector>

#include "tadist/measure.hpp"
#include "tadist/metric_space.hpp"
#include "tadist/transport.hpp"

namespace tadist {

/// How the W^0 linear program is assembled.
enum class W0Formulation {
  /// kEdgeFlow for p = 1, kCoupling otherwise.
  kAuto,
  /// Coupling variables on all pairs of points of the doubling.
  kCoupling,
  /// p = 1 only: transshipment along the irreducible edges of the doubling
  /// (same optimum as kCoupling, far fewer variables).
  kEdgeFlow,
};

struct W0Options {
  W0Formulation formulation = W0Formulation::kAuto;
  /// Impose (mu + 2 rho)(X) = 1 instead of <= 1. Same value; kept as a
  /// cross-check of the relaxation.
  bool mass_equality = false;
  /// Recover an optimal coupling on the doubling. For kEdgeFlow this costs an
  /// extra transport solve.
  bool with_plan = true;
};

struct W0Witness {
  DiscreteMeasure rho;
  DiscreteMeasure eta;
  /// Coupling between phi(mu + rho, rho) and phi(nu + eta, eta), indexed by
  /// points of the doubling.
  TransportPlan plan;
  double value = 0.0;
};

struct W0Result {
  double value = 0.0;
  W0Witness witness;
  long iterations = 0;
};

/// Solves W^0_p repeatedly on one space, caching the doubling and the edge
/// graph used by the p = 1 formulation.
class W0Solver {
 public:
  W0Solver(SpacePtr space, double p, W0Options options = {});

  W0Result solve(const DiscreteMeasure& mu, const DiscreteMeasure& nu) const;

  const GluedSpace& doubling() const { return doubling_; }
  double p() const { return p_; }
  W0Formulation formulation() const { return formulation_; }

 private:
  W0Result solve_coupling(const DiscreteMeasure& mu,
                          const DiscreteMeasure& nu) const;
  W0Result solve_edge_flow(const DiscreteMeasure& mu,
                           const DiscreteMeasure& nu) const;

  SpacePtr space_;
  double p_;
  W0Options options_;
  W0Formulation formulation_;
  GluedSpace doubling_;
  std::vector<std::size_t> interior_pos_;  // base point -> row block index
  std::vector<std::pair<std::size_t, std::size_t>> glued_edges_;
};

/// Transportation-annihilation pre-distance W^0_p between subprobabilities on
/// the interior.
W0Result w0(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
            const W0Options& options = {});

/// Base-space edges (i, j), i < j, that no third point splits:
/// d(i,k) + d(k,j) > d(i,j) for all k. Their graph metric is d.
std::vector<std::pair<std::size_t, std::size_t>> irreducible_edges(
    const MetricSpace& space, double relative_tolerance = 1e-12);

/// p = 1 representation as one min-cost flow:
/// min W_1(mu1,nu1) + W*_1(mu0) + W*_1(nu0) over splits mu = mu1 + mu0,
/// nu = nu1 + nu0 with (mu + nu0)(X) <= 1 and (nu + mu0)(X) <= 1.
double w0_rep_p1(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// The same decomposition with p-th powers, using self-couplings for the
/// annihilation terms. An upper bound for W^0_p(mu,nu) (returned as a p-th
/// root).
double w0_upper_rep(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                    double p);

/// The nine coupling blocks of the decomposition of W^0, in the order
/// (mu,nu) (mu,eta+) (mu,eta-) (rho+,nu) (rho+,eta+) (rho+,eta-)
/// (rho-,nu) (rho-,eta+) (rho-,eta-). Rows/cols index base points.
struct NineTermDecomposition {
  std::vector<Eigen::MatrixXd> blocks;
};

/// Block k is priced with d* for k in {2,5,6,7} and with d otherwise.
bool nine_term_uses_star(int block);

/// Evaluates the objective (sum of block costs, before the root) and throws
/// MassError if the decomposition does not match mu, nu and the constraints.
double nine_term_objective(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           double p, const NineTermDecomposition& dec,
                           double tolerance = 1e-9);

struct NineTermResult {
  double value = 0.0;
  NineTermDecomposition decomposition;
};

/// Minimises the nine-term objective as one LP; value is the p-th root.
NineTermResult w0_nine_term(const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu, double p);

enum class FlatStrategy { kDirect, kBoundaryAnnihilation };

struct ChainSpec {
  std::vector<DiscreteMeasure> intermediates;  // eta_0 = mu ... eta_m = nu
  double value = 0.0;
};

struct FlatUpperResult {
  double value = 0.0;
  ChainSpec chain;
  FlatStrategy best = FlatStrategy::kDirect;
};

/// Upper bound for W^flat_p from a chain of W^0_p steps. kBoundaryAnnihilation
/// splits an optimal W'_1 plan into transported, annihilated and created
/// parts and interpolates with m steps; the result is never worse than the
/// direct one-step chain.
FlatUpperResult w_flat_upper(const DiscreteMeasure& mu,
                             const DiscreteMeasure& nu, double p,
                             FlatStrategy strategy, int steps = 64);

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// W'_1 <= W^flat_p <= W^sharp_p <= W'_p.
Bounds w_sharp_bounds(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                      double p);

/// For mass(mu) >= mass(nu): min W_1(mu1, nu) + sum d(x,z) mu0(x) over
/// mu = mu1 + mu0, mass(mu1) = mass(nu). Upper bound for W^0_1.
double w0_upper_estimate(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         std::size_t z);

struct VagueRow {
  std::size_t n = 0;
  double distance = 0.0;
  double mass_gap = 0.0;
};

struct VagueReport {
  std::vector<VagueRow> rows;
  /// Distances nonincreasing (within tolerance) with a final value below
  /// the first one, or identically zero.
  bool monotone_decay = false;
};

VagueReport vague_convergence_probe(const std::vector<DiscreteMeasure>& sequence,
                                    const DiscreteMeasure& limit, double p,
                                    double tolerance = 1e-9);

}  // namespace tadist
