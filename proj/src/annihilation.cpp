#include "tadist/annihilation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

#include "tadist/error.hpp"
#include "tadist/lp/network_simplex.hpp"
#include "tadist/lp/revised_simplex.hpp"

namespace tadist {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

double pw(double c, double p) { return p == 1.0 ? c : std::pow(c, p); }

double root(double v, double p) {
  v = std::max(v, 0.0);
  return p == 1.0 ? v : std::pow(v, 1.0 / p);
}

void require_interior_pair(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  require_same_space(mu.space(), nu.space());
  require_subprobability(mu, true);
  require_subprobability(nu, true);
}

lp::LpSolution solve_or_throw(const lp::LinearProgram& prog, const char* what) {
  lp::LpSolution sol = lp::solve(prog);
  if (sol.status != lp::LpStatus::kOptimal)
    throw SolverError(std::string(what) + ": LP ended " +
                      lp::to_string(sol.status));
  return sol;
}

std::vector<std::size_t> support_of(const DiscreteMeasure& mu) {
  return mu.support();
}

}  // namespace

// ---------------------------------------------------------------------------
// W^0 as an LP on the doubling

std::vector<std::pair<std::size_t, std::size_t>> irreducible_edges(
    const MetricSpace& space, double relative_tolerance) {
  const auto& d = space.distances();
  const std::size_t n = space.size();
  const double tol = relative_tolerance * std::max(1.0, d.maxCoeff());
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      bool split = false;
      for (std::size_t k = 0; k < n && !split; ++k) {
        if (k == i || k == j) continue;
        split = d(i, k) + d(k, j) <= d(i, j) + tol;
      }
      if (!split) out.emplace_back(i, j);
    }
  }
  return out;
}

W0Solver::W0Solver(SpacePtr space, double p, W0Options options)
    : space_(std::move(space)),
      p_(p),
      options_(options),
      formulation_(options.formulation),
      doubling_(glue(space_, 2)) {
  require_exponent(p);
  if (formulation_ == W0Formulation::kAuto)
    formulation_ = p == 1.0 ? W0Formulation::kEdgeFlow : W0Formulation::kCoupling;
  if (formulation_ == W0Formulation::kEdgeFlow && p != 1.0)
    throw DomainError("the edge-flow formulation of W0 requires p = 1");
  if (space_->interior().empty())
    throw ConfigError("W0 needs a nonempty interior");

  interior_pos_.assign(space_->size(), kNone);
  const auto interior = space_->interior();
  for (std::size_t k = 0; k < interior.size(); ++k) interior_pos_[interior[k]] = k;

  if (formulation_ == W0Formulation::kEdgeFlow) {
    // Within a sheet the glued metric is d; across sheets every path passes
    // through Z. So sheet copies of the base edges generate d-hat.
    const auto& g = doubling_;
    for (auto [i, j] : irreducible_edges(*space_)) {
      const bool zi = space_->is_boundary(i), zj = space_->is_boundary(j);
      if (zi && zj) {
        glued_edges_.emplace_back(g.index(0, i), g.index(0, j));
        continue;
      }
      for (std::size_t s = 0; s < 2; ++s)
        glued_edges_.emplace_back(g.index(s, i), g.index(s, j));
    }
  }
}

W0Result W0Solver::solve(const DiscreteMeasure& mu,
                         const DiscreteMeasure& nu) const {
  if (&mu.space() != space_.get())
    throw ConfigError("measure does not live on the solver's space");
  require_interior_pair(mu, nu);
  if (mu.mass() == 0.0 && nu.mass() == 0.0) {
    TransportPlan plan;
    plan.p = p_;
    return {0.0,
            {DiscreteMeasure::zero(space_), DiscreteMeasure::zero(space_),
             std::move(plan), 0.0},
            0};
  }
  return formulation_ == W0Formulation::kEdgeFlow ? solve_edge_flow(mu, nu)
                                                  : solve_coupling(mu, nu);
}

W0Result W0Solver::solve_coupling(const DiscreteMeasure& mu,
                                  const DiscreteMeasure& nu) const {
  const GluedSpace& g = doubling_;
  const MetricSpace& hat = g.space();
  const MetricSpace& base = *space_;
  const std::size_t m = g.size();
  const auto interior = base.interior();
  const int ny = static_cast<int>(interior.size());
  const bool eq = options_.mass_equality;

  // Rows: S_y (source sheet balance), T_y (target sheet balance), mass.
  // rho and eta are eliminated: rho(y) = outflow of (-,y), rho(z) = half the
  // outflow of z; likewise for eta with inflows.
  lp::LinearProgram prog;
  for (std::size_t y : interior) prog.add_row(lp::Sense::kEqual, mu[y]);
  for (std::size_t y : interior) prog.add_row(lp::Sense::kEqual, nu[y]);
  const int mass_row =
      prog.add_row(eq ? lp::Sense::kEqual : lp::Sense::kLessEqual, 1.0);

  std::vector<std::size_t> nearest(m, kNone);
  for (std::size_t a = 0; a < m; ++a)
    if (g.sheet_of(a) != kSharedSheet)
      nearest[a] = g.index(0, base.nearest_boundary(g.base_of(a)));

  std::vector<std::pair<std::uint32_t, std::uint32_t>> cols;
  std::vector<lp::LinearProgram::Entry> entries;
  for (std::size_t a = 0; a < m; ++a) {
    const int sa = g.sheet_of(a);
    for (std::size_t b = 0; b < m; ++b) {
      const int sb = g.sheet_of(b);
      const bool za = sa == kSharedSheet, zb = sb == kSharedSheet;
      if (!eq) {
        // z-z' pairs only use up mass; a Y point pairs with its nearest z.
        if (za && zb) continue;
        if (za && a != nearest[b]) continue;
        if (zb && b != nearest[a]) continue;
      }
      entries.clear();
      if (!za)
        entries.emplace_back(static_cast<int>(interior_pos_[g.base_of(a)]),
                             sa == 0 ? 1.0 : -1.0);
      if (!zb)
        entries.emplace_back(ny + static_cast<int>(interior_pos_[g.base_of(b)]),
                             sb == 0 ? 1.0 : -1.0);
      entries.emplace_back(mass_row, 1.0);
      prog.add_column(pw(hat.dist(a, b), p_), entries);
      cols.emplace_back(static_cast<std::uint32_t>(a),
                        static_cast<std::uint32_t>(b));
    }
  }

  const lp::LpSolution sol = solve_or_throw(prog, "W0 coupling LP");

  std::vector<double> rho(base.size(), 0.0), eta(base.size(), 0.0);
  TransportPlan plan;
  plan.p = p_;
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const double q = sol.x[k];
    if (q <= 0.0) continue;
    const auto [a, b] = cols[k];
    plan.entries.push_back({a, b, q});
    if (g.sheet_of(a) == 1) rho[g.base_of(a)] += q;
    if (g.sheet_of(a) == kSharedSheet) rho[g.base_of(a)] += 0.5 * q;
    if (g.sheet_of(b) == 1) eta[g.base_of(b)] += q;
    if (g.sheet_of(b) == kSharedSheet) eta[g.base_of(b)] += 0.5 * q;
  }
  plan.cost_value = std::max(0.0, sol.objective);
  for (std::size_t a = 0; a < m; ++a) {
    plan.rows.push_back(a);
    plan.cols.push_back(a);
  }
  const double value = root(sol.objective, p_);
  if (!options_.with_plan) plan.entries.clear();
  return {value,
          {DiscreteMeasure(space_, std::move(rho)),
           DiscreteMeasure(space_, std::move(eta)), std::move(plan), value},
          sol.iterations};
}

W0Result W0Solver::solve_edge_flow(const DiscreteMeasure& mu,
                                   const DiscreteMeasure& nu) const {
  const GluedSpace& g = doubling_;
  const MetricSpace& hat = g.space();
  const MetricSpace& base = *space_;
  const std::size_t m = g.size();
  const bool eq = options_.mass_equality;

  // Node balance on the doubling: out - in - rho-part + eta-part = mu - nu.
  lp::LinearProgram prog;
  for (std::size_t a = 0; a < m; ++a) {
    const double rhs =
        g.sheet_of(a) == 0 ? mu[g.base_of(a)] - nu[g.base_of(a)] : 0.0;
    prog.add_row(lp::Sense::kEqual, rhs);
  }
  const int mass_row = prog.add_row(
      eq ? lp::Sense::kEqual : lp::Sense::kLessEqual,
      std::max(0.0, 1.0 - mu.mass()));

  for (auto [a, b] : glued_edges_) {
    const double c = hat.dist(a, b);
    const int ia = static_cast<int>(a), ib = static_cast<int>(b);
    prog.add_column(c, {{ia, 1.0}, {ib, -1.0}});
    prog.add_column(c, {{ib, 1.0}, {ia, -1.0}});
  }
  const int first_aux = prog.columns();
  for (std::size_t x = 0; x < base.size(); ++x) {
    if (base.is_boundary(x)) {
      const int z = static_cast<int>(g.index(0, x));
      prog.add_column(0.0, {{z, -2.0}, {mass_row, 2.0}});
      prog.add_column(0.0, {{z, 2.0}});
    } else {
      const int up = static_cast<int>(g.index(0, x));
      const int down = static_cast<int>(g.index(1, x));
      prog.add_column(0.0, {{up, -1.0}, {down, -1.0}, {mass_row, 2.0}});
      prog.add_column(0.0, {{up, 1.0}, {down, 1.0}});
    }
  }

  const lp::LpSolution sol = solve_or_throw(prog, "W0 edge-flow LP");

  std::vector<double> rho(base.size()), eta(base.size());
  for (std::size_t x = 0; x < base.size(); ++x) {
    rho[x] = sol.x[first_aux + 2 * x];
    eta[x] = sol.x[first_aux + 2 * x + 1];
  }
  const double value = std::max(0.0, sol.objective);

  TransportPlan plan;
  plan.p = 1.0;
  plan.cost_value = value;
  if (options_.with_plan) {
    std::vector<double> src(m, 0.0), dst(m, 0.0);
    for (std::size_t a = 0; a < m; ++a) {
      const std::size_t x = g.base_of(a);
      switch (g.sheet_of(a)) {
        case 0:
          src[a] = mu[x] + rho[x];
          dst[a] = nu[x] + eta[x];
          break;
        case 1:
          src[a] = rho[x];
          dst[a] = eta[x];
          break;
        default:
          src[a] = 2.0 * rho[x];
          dst[a] = 2.0 * eta[x];
          break;
      }
    }
    double ms = 0.0, md = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      ms += src[a];
      md += dst[a];
    }
    // Remove LP round-off so the two sides balance exactly.
    if (md > 0.0)
      for (double& w : dst) w *= ms / md;
    TransportResult t =
        wasserstein(DiscreteMeasure(g.space_ptr(), std::move(src)),
                    DiscreteMeasure(g.space_ptr(), std::move(dst)), 1.0);
    plan = std::move(t.plan);
    plan.cost_value = value;
  }
  return {value,
          {DiscreteMeasure(space_, std::move(rho)),
           DiscreteMeasure(space_, std::move(eta)), std::move(plan), value},
          sol.iterations};
}

W0Result w0(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double p,
            const W0Options& options) {
  require_same_space(mu.space(), nu.space());
  return W0Solver(mu.space_ptr(), p, options).solve(mu, nu);
}

// ---------------------------------------------------------------------------
// Decomposition formulas

double w0_rep_p1(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  require_interior_pair(mu, nu);
  const MetricSpace& s = mu.space();
  const Eigen::VectorXd b = boundary_distances(s);
  const auto sx = support_of(mu);
  const auto sy = support_of(nu);
  const std::size_t nx = sx.size(), nyy = sy.size();
  const std::size_t node_a = nx + nyy, node_b = node_a + 1;

  // mu0 flows x -> A at cost d'(x, boundary), nu0 flows B -> y likewise; the
  // arc A -> B carries nu0, whose mass is capped by 1 - mu(X).
  lp::NetworkSimplex ns(node_b + 1);
  for (std::size_t i = 0; i < nx; ++i) ns.set_supply(i, mu[sx[i]]);
  for (std::size_t j = 0; j < nyy; ++j) ns.set_supply(nx + j, -nu[sy[j]]);
  ns.set_supply(node_a, nu.mass() - mu.mass());
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < nyy; ++j)
      ns.add_arc(i, nx + j, s.dist(sx[i], sy[j]));
  for (std::size_t i = 0; i < nx; ++i) ns.add_arc(i, node_a, b[sx[i]]);
  for (std::size_t j = 0; j < nyy; ++j) ns.add_arc(node_b, nx + j, b[sy[j]]);
  ns.add_arc(node_a, node_b, 0.0, std::max(0.0, 1.0 - mu.mass()));
  if (ns.run() != lp::NetworkSimplex::Status::kOptimal)
    throw SolverError("decomposition flow did not reach an optimum");
  return std::max(0.0, ns.total_cost());
}

double w0_upper_rep(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                    double p) {
  require_exponent(p);
  require_interior_pair(mu, nu);
  const MetricSpace& s = mu.space();
  const auto sx = support_of(mu);
  const auto sy = support_of(nu);
  if (sx.empty() && sy.empty()) return 0.0;
  const Eigen::MatrixXd star = star_matrix(s);
  const double half = std::pow(2.0, -p);
  const int nx = static_cast<int>(sx.size()), nyy = static_cast<int>(sy.size());

  // Rows: M_x, A_x (a symmetric), N_y, B_y (b symmetric), two mass rows.
  lp::LinearProgram prog;
  for (std::size_t x : sx) prog.add_row(lp::Sense::kEqual, mu[x]);
  for (int i = 0; i < nx; ++i) prog.add_row(lp::Sense::kEqual, 0.0);
  for (std::size_t y : sy) prog.add_row(lp::Sense::kEqual, nu[y]);
  for (int j = 0; j < nyy; ++j) prog.add_row(lp::Sense::kEqual, 0.0);
  const int mass_b = prog.add_row(lp::Sense::kLessEqual,
                                  std::max(0.0, 1.0 - mu.mass()));
  const int mass_a = prog.add_row(lp::Sense::kLessEqual,
                                  std::max(0.0, 1.0 - nu.mass()));
  const int m0 = 0, a0 = nx, n0 = 2 * nx, b0 = 2 * nx + nyy;

  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < nyy; ++j)
      prog.add_column(pw(s.dist(sx[i], sy[j]), p),
                      {{m0 + i, 1.0}, {n0 + j, 1.0}});
  for (int i = 0; i < nx; ++i) {
    for (int k = 0; k < nx; ++k) {
      const double c = half * pw(star(sx[i], sx[k]), p);
      if (i == k)
        prog.add_column(c, {{m0 + i, 1.0}, {mass_a, 1.0}});
      else
        prog.add_column(c, {{m0 + i, 1.0}, {a0 + i, 1.0}, {a0 + k, -1.0},
                            {mass_a, 1.0}});
    }
  }
  for (int j = 0; j < nyy; ++j) {
    for (int k = 0; k < nyy; ++k) {
      const double c = half * pw(star(sy[j], sy[k]), p);
      if (j == k)
        prog.add_column(c, {{n0 + j, 1.0}, {mass_b, 1.0}});
      else
        prog.add_column(c, {{n0 + j, 1.0}, {b0 + j, 1.0}, {b0 + k, -1.0},
                            {mass_b, 1.0}});
    }
  }
  const lp::LpSolution sol = solve_or_throw(prog, "decomposition LP");
  return root(sol.objective, p);
}

bool nine_term_uses_star(int block) {
  return block == 2 || block == 5 || block == 6 || block == 7;
}

namespace {

// Block k couples (row family k / 3) with (column family k % 3); family 0 is
// mu (rows) or nu (columns), family 1 is the plus part of rho / eta and
// family 2 the minus part.
int row_family(int k) { return k / 3; }
int col_family(int k) { return k % 3; }

}  // namespace

double nine_term_objective(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                           double p, const NineTermDecomposition& dec,
                           double tolerance) {
  require_exponent(p);
  require_same_space(mu.space(), nu.space());
  const MetricSpace& s = mu.space();
  const auto n = static_cast<Eigen::Index>(s.size());
  if (dec.blocks.size() != 9) throw ConfigError("expected nine coupling blocks");
  for (const auto& blk : dec.blocks)
    if (blk.rows() != n || blk.cols() != n)
      throw ConfigError("coupling block has the wrong shape");

  Eigen::VectorXd rowsum[3], colsum[3];
  for (int f = 0; f < 3; ++f) {
    rowsum[f] = Eigen::VectorXd::Zero(n);
    colsum[f] = Eigen::VectorXd::Zero(n);
  }
  Eigen::VectorXd rho_plus = Eigen::VectorXd::Zero(n), rho_minus = rho_plus;
  Eigen::VectorXd eta_plus = rho_plus, eta_minus = rho_plus;
  double total = 0.0;
  const Eigen::MatrixXd star = star_matrix(s);
  for (int k = 0; k < 9; ++k) {
    const Eigen::MatrixXd& q = dec.blocks[k];
    if (q.minCoeff() < -tolerance)
      throw MassError("coupling block has negative entries");
    const Eigen::VectorXd r = q.rowwise().sum(), c = q.colwise().sum();
    rowsum[row_family(k)] += r;
    colsum[col_family(k)] += c;
    if (row_family(k) == 1) rho_plus += r;
    if (row_family(k) == 2) rho_minus += r;
    if (col_family(k) == 1) eta_plus += c;
    if (col_family(k) == 2) eta_minus += c;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j)
        if (q(i, j) > 0.0)
          total += q(i, j) *
                   pw(nine_term_uses_star(k) ? star(i, j) : s.dist(i, j), p);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (std::abs(rowsum[0][i] - mu[i]) > tolerance)
      throw MassError("mu blocks do not add up to mu");
    if (std::abs(colsum[0][i] - nu[i]) > tolerance)
      throw MassError("nu blocks do not add up to nu");
    if (std::abs(rho_plus[i] - rho_minus[i]) > tolerance)
      throw MassError("rho splits disagree");
    if (std::abs(eta_plus[i] - eta_minus[i]) > tolerance)
      throw MassError("eta splits disagree");
  }
  if (mu.mass() + 2.0 * rho_plus.sum() > 1.0 + tolerance ||
      nu.mass() + 2.0 * eta_plus.sum() > 1.0 + tolerance)
    throw MassError("decomposition exceeds unit mass");
  return total;
}

NineTermResult w0_nine_term(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                            double p) {
  require_exponent(p);
  require_interior_pair(mu, nu);
  const MetricSpace& s = mu.space();
  const int n = static_cast<int>(s.size());
  const Eigen::MatrixXd star = star_matrix(s);
  const auto sx = support_of(mu);
  const auto sy = support_of(nu);

  lp::LinearProgram prog;
  std::vector<int> mu_row(n, -1), nu_row(n, -1);
  for (std::size_t x : sx) mu_row[x] = prog.add_row(lp::Sense::kEqual, mu[x]);
  const int rho0 = prog.rows();
  for (int x = 0; x < n; ++x) prog.add_row(lp::Sense::kEqual, 0.0);
  for (std::size_t y : sy) nu_row[y] = prog.add_row(lp::Sense::kEqual, nu[y]);
  const int eta0 = prog.rows();
  for (int y = 0; y < n; ++y) prog.add_row(lp::Sense::kEqual, 0.0);
  const int mass_rho = prog.add_row(lp::Sense::kLessEqual,
                                    std::max(0.0, 1.0 - mu.mass()));
  const int mass_eta = prog.add_row(lp::Sense::kLessEqual,
                                    std::max(0.0, 1.0 - nu.mass()));

  struct Var {
    int block, i, j;
  };
  std::vector<Var> vars;
  std::vector<lp::LinearProgram::Entry> e;
  for (int k = 0; k < 9; ++k) {
    const int rf = row_family(k), cf = col_family(k);
    for (int i = 0; i < n; ++i) {
      if (rf == 0 && mu_row[i] < 0) continue;
      for (int j = 0; j < n; ++j) {
        if (cf == 0 && nu_row[j] < 0) continue;
        e.clear();
        if (rf == 0) e.emplace_back(mu_row[i], 1.0);
        if (rf == 1) {
          e.emplace_back(rho0 + i, 1.0);
          e.emplace_back(mass_rho, 2.0);
        }
        if (rf == 2) e.emplace_back(rho0 + i, -1.0);
        if (cf == 0) e.emplace_back(nu_row[j], 1.0);
        if (cf == 1) {
          e.emplace_back(eta0 + j, 1.0);
          e.emplace_back(mass_eta, 2.0);
        }
        if (cf == 2) e.emplace_back(eta0 + j, -1.0);
        const double c = nine_term_uses_star(k) ? star(i, j) : s.dist(i, j);
        prog.add_column(pw(c, p), e);
        vars.push_back({k, i, j});
      }
    }
  }
  const lp::LpSolution sol = solve_or_throw(prog, "nine-term LP");
  NineTermResult out;
  out.decomposition.blocks.assign(9, Eigen::MatrixXd::Zero(n, n));
  for (std::size_t v = 0; v < vars.size(); ++v)
    out.decomposition.blocks[vars[v].block](vars[v].i, vars[v].j) = sol.x[v];
  out.value = root(sol.objective, p);
  return out;
}

// ---------------------------------------------------------------------------
// Chains and bounds

FlatUpperResult w_flat_upper(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                             double p, FlatStrategy strategy, int steps) {
  require_exponent(p);
  require_interior_pair(mu, nu);
  if (steps < 1) throw ConfigError("chains need at least one step");
  W0Options opt;
  opt.with_plan = false;
  const W0Solver solver(mu.space_ptr(), p, opt);

  FlatUpperResult out;
  out.value = solver.solve(mu, nu).value;
  out.chain.intermediates = {mu, nu};
  out.chain.value = out.value;
  out.best = FlatStrategy::kDirect;
  if (strategy == FlatStrategy::kDirect) return out;

  // Split an optimal W'_1 plan into moved (mu1 -> nu1), annihilated (mu0)
  // and created (nu0) parts; shrink mu0 into the boundary during the first
  // half of the chain and grow nu0 during the second.
  const std::size_t n = mu.size();
  const TransportResult wp = w_prime(mu, nu, 1.0);
  std::vector<double> mu1(n, 0.0), nu1(n, 0.0), mu0(n, 0.0), nu0(n, 0.0);
  const MetricSpace& space = mu.space();
  for (const PlanEntry& e : wp.plan.entries) {
    // An interior pair priced by the shortcut d' < d also goes through Z.
    const bool through_z =
        e.from < n && e.to < n &&
        dagger_metric(space, e.from, e.to) < space.dist(e.from, e.to) - 1e-12;
    if (through_z) {
      mu0[e.from] += e.mass;
      nu0[e.to] += e.mass;
    } else if (e.from < n && e.to < n) {
      mu1[e.from] += e.mass;
      nu1[e.to] += e.mass;
    } else if (e.from < n) {
      mu0[e.from] += e.mass;
    } else if (e.to < n) {
      nu0[e.to] += e.mass;
    }
  }
  ChainSpec chain;
  chain.intermediates.push_back(mu);
  for (int i = 1; i < steps; ++i) {
    const double t = static_cast<double>(i) / steps;
    std::vector<double> w(n);
    for (std::size_t x = 0; x < n; ++x) {
      w[x] = (1.0 - t) * mu1[x] + t * nu1[x];
      w[x] += t <= 0.5 ? (1.0 - 2.0 * t) * mu0[x] : (2.0 * t - 1.0) * nu0[x];
    }
    chain.intermediates.emplace_back(mu.space_ptr(), std::move(w));
  }
  chain.intermediates.push_back(nu);
  for (std::size_t i = 1; i < chain.intermediates.size(); ++i)
    chain.value +=
        solver.solve(chain.intermediates[i - 1], chain.intermediates[i]).value;
  if (chain.value < out.value) {
    out.value = chain.value;
    out.chain = std::move(chain);
    out.best = FlatStrategy::kBoundaryAnnihilation;
  }
  return out;
}

Bounds w_sharp_bounds(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                      double p) {
  require_exponent(p);
  require_interior_pair(mu, nu);
  const double lower = w_prime(mu, nu, 1.0).value;
  if (p == 1.0) return {lower, lower};
  return {lower, w_prime(mu, nu, p).value};
}

double w0_upper_estimate(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         std::size_t z) {
  require_interior_pair(mu, nu);
  const MetricSpace& s = mu.space();
  if (z >= s.size() || !s.is_boundary(z))
    throw ConfigError("estimate needs a boundary point");
  const double excess = mu.mass() - nu.mass();
  if (excess < -kMassTolerance)
    throw MassError("estimate needs mass(mu) >= mass(nu)");
  const auto sx = support_of(mu);
  const auto sy = support_of(nu);
  const std::size_t sink = sx.size() + sy.size();
  lp::NetworkSimplex ns(sink + 1);
  for (std::size_t i = 0; i < sx.size(); ++i) ns.set_supply(i, mu[sx[i]]);
  for (std::size_t j = 0; j < sy.size(); ++j)
    ns.set_supply(sx.size() + j, -nu[sy[j]]);
  ns.set_supply(sink, -std::max(0.0, excess));
  for (std::size_t i = 0; i < sx.size(); ++i) {
    for (std::size_t j = 0; j < sy.size(); ++j)
      ns.add_arc(i, sx.size() + j, s.dist(sx[i], sy[j]));
    ns.add_arc(i, sink, s.dist(sx[i], z));
  }
  if (ns.run() != lp::NetworkSimplex::Status::kOptimal)
    throw SolverError("estimate flow did not reach an optimum");
  return std::max(0.0, ns.total_cost());
}

VagueReport vague_convergence_probe(const std::vector<DiscreteMeasure>& sequence,
                                    const DiscreteMeasure& limit, double p,
                                    double tolerance) {
  VagueReport rep;
  W0Options opt;
  opt.with_plan = false;
  const W0Solver solver(limit.space_ptr(), p, opt);
  for (std::size_t i = 0; i < sequence.size(); ++i) {
    const double d = solver.solve(sequence[i], limit).value;
    rep.rows.push_back({i + 1, d, std::abs(sequence[i].mass() - limit.mass())});
  }
  if (rep.rows.empty()) return rep;
  bool monotone = true, all_zero = true;
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    all_zero &= rep.rows[i].distance <= tolerance;
    if (i > 0)
      monotone &= rep.rows[i].distance <= rep.rows[i - 1].distance + tolerance;
  }
  const bool decays =
      rep.rows.back().distance < rep.rows.front().distance - tolerance;
  rep.monotone_decay = all_zero || (monotone && decays);
  return rep;
}

}  // namespace tadist
