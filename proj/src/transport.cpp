#include "tadist/transport.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "tadist/error.hpp"
#include "tadist/lp/network_simplex.hpp"

namespace tadist {

namespace {

struct Atom {
  std::size_t index;
  double mass;
};

std::vector<Atom> atoms_of(const DiscreteMeasure& mu) {
  std::vector<Atom> out;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i] > 0.0) out.push_back({i, mu[i]});
  return out;
}

double power(double c, double p) { return p == 1.0 ? c : std::pow(c, p); }

double root(double v, double p) {
  v = std::max(v, 0.0);
  return p == 1.0 ? v : std::pow(v, 1.0 / p);
}

/// Bipartite min-cost flow between two atom lists with equal total mass.
TransportPlan bipartite(const std::vector<Atom>& src,
                        const std::vector<Atom>& dst,
                        const std::function<double(std::size_t, std::size_t)>& cost,
                        double p) {
  TransportPlan plan;
  plan.p = p;
  for (const Atom& a : src) plan.rows.push_back(a.index);
  for (const Atom& b : dst) plan.cols.push_back(b.index);
  if (src.empty() || dst.empty()) return plan;

  lp::NetworkSimplex ns(src.size() + dst.size());
  for (std::size_t i = 0; i < src.size(); ++i) ns.set_supply(i, src[i].mass);
  for (std::size_t j = 0; j < dst.size(); ++j)
    ns.set_supply(src.size() + j, -dst[j].mass);
  std::vector<double> arc_cost;
  arc_cost.reserve(src.size() * dst.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t j = 0; j < dst.size(); ++j) {
      const double c = power(cost(src[i].index, dst[j].index), p);
      ns.add_arc(i, src.size() + j, c);
      arc_cost.push_back(c);
    }
  }
  if (ns.run() != lp::NetworkSimplex::Status::kOptimal)
    throw SolverError("transport flow did not reach an optimum");
  std::size_t e = 0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t j = 0; j < dst.size(); ++j, ++e) {
      const double f = ns.flow(e);
      if (f <= 0.0) continue;
      plan.entries.push_back({src[i].index, dst[j].index, f});
      plan.cost_value += arc_cost[e] * f;
    }
  }
  return plan;
}

TransportResult finish(TransportPlan plan) {
  TransportResult r;
  r.value = root(plan.cost_value, plan.p);
  r.plan = std::move(plan);
  return r;
}

}  // namespace

void require_exponent(double p) {
  if (!std::isfinite(p) || p < 1.0)
    throw DomainError("exponent p must be a finite number >= 1");
}

double TransportPlan::mass() const {
  double m = 0.0;
  for (const PlanEntry& e : entries) m += e.mass;
  return m;
}

std::vector<double> TransportPlan::source_marginal(std::size_t n) const {
  std::vector<double> out(n, 0.0);
  for (const PlanEntry& e : entries)
    if (e.from < n) out[e.from] += e.mass;
  return out;
}

std::vector<double> TransportPlan::target_marginal(std::size_t n) const {
  std::vector<double> out(n, 0.0);
  for (const PlanEntry& e : entries)
    if (e.to < n) out[e.to] += e.mass;
  return out;
}

double marginal_error(const TransportPlan& plan, std::span<const double> source,
                      std::span<const double> target) {
  const auto rs = plan.source_marginal(source.size());
  const auto cs = plan.target_marginal(target.size());
  double err = 0.0, scale = 1.0;
  for (std::size_t i = 0; i < source.size(); ++i) {
    err = std::max(err, std::abs(rs[i] - source[i]));
    scale = std::max(scale, source[i]);
  }
  for (std::size_t j = 0; j < target.size(); ++j) {
    err = std::max(err, std::abs(cs[j] - target[j]));
    scale = std::max(scale, target[j]);
  }
  return err / scale;
}

TransportResult wasserstein(const Eigen::MatrixXd& cost,
                            const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu, double p) {
  require_exponent(p);
  require_same_space(mu.space(), nu.space());
  require_equal_mass(mu, nu);
  const auto n = static_cast<Eigen::Index>(mu.size());
  if (cost.rows() != n || cost.cols() != n)
    throw ConfigError("cost matrix does not match the space");
  if (!cost.allFinite() || cost.minCoeff() < 0.0)
    throw ConfigError("transport costs must be finite and nonnegative");
  return finish(bipartite(atoms_of(mu), atoms_of(nu),
                          [&](std::size_t i, std::size_t j) {
                            return cost(i, j);
                          },
                          p));
}

TransportResult wasserstein(const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu, double p) {
  return wasserstein(mu.space().distances(), mu, nu, p);
}

TransportResult w_star(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                       double p) {
  require_same_space(mu.space(), nu.space());
  return wasserstein(star_matrix(mu.space()), mu, nu, p);
}

double annihilation_cost(const DiscreteMeasure& mu, double p) {
  return 0.5 * w_star(mu, mu, p).value;
}

TransportResult w_dagger_lp(const DiscreteMeasure& mu,
                            const DiscreteMeasure& nu, double p) {
  require_same_space(mu.space(), nu.space());
  const Eigen::VectorXd b = boundary_distances(mu.space());
  const Eigen::Index n = b.size();
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) c(i, j) = b[i] + b[j];
  return wasserstein(c, mu, nu, p);
}

TransportResult w_dagger(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                         double p) {
  require_exponent(p);
  if (p != 1.0) return w_dagger_lp(mu, nu, p);
  require_same_space(mu.space(), nu.space());
  require_equal_mass(mu, nu);
  const Eigen::VectorXd b = boundary_distances(mu.space());
  TransportPlan plan;
  plan.p = 1.0;
  const auto src = atoms_of(mu);
  const auto dst = atoms_of(nu);
  for (const Atom& a : src) {
    plan.rows.push_back(a.index);
    plan.cost_value += b[a.index] * a.mass;
  }
  for (const Atom& a : dst) {
    plan.cols.push_back(a.index);
    plan.cost_value += b[a.index] * a.mass;
  }
  // Any coupling is optimal; report the product one.
  const double m = mu.mass();
  if (m > 0.0) {
    for (const Atom& a : src)
      for (const Atom& c : dst)
        plan.entries.push_back({a.index, c.index, a.mass * c.mass / m});
  }
  return finish(std::move(plan));
}

TransportResult w_prime(const DiscreteMeasure& mu, const DiscreteMeasure& nu,
                        double p) {
  require_exponent(p);
  require_same_space(mu.space(), nu.space());
  require_subprobability(mu, false);
  require_subprobability(nu, false);
  const MetricSpace& s = mu.space();
  const std::size_t n = s.size();
  const Eigen::VectorXd b = boundary_distances(s);
  auto src = atoms_of(mu);
  auto dst = atoms_of(nu);
  // Mass above one is clamped within kMassTolerance; rounding is absorbed
  // by the flow solver.
  const double top_mu = std::max(0.0, 1.0 - mu.mass());
  const double top_nu = std::max(0.0, 1.0 - nu.mass());
  if (top_mu > 0.0) src.push_back({n, top_mu});
  if (top_nu > 0.0) dst.push_back({n, top_nu});
  auto cost = [&](std::size_t i, std::size_t j) -> double {
    if (i == n && j == n) return 0.0;
    if (i == n) return b[j];
    if (j == n) return b[i];
    return std::min(s.dist(i, j), b[i] + b[j]);
  };
  return finish(bipartite(src, dst, cost, p));
}

double w_prime_zero(const DiscreteMeasure& mu, double p) {
  require_exponent(p);
  require_subprobability(mu, false);
  const Eigen::VectorXd b = boundary_distances(mu.space());
  double v = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    if (mu[i] > 0.0) v += power(b[i], p) * mu[i];
  return root(v, p);
}

TransportResult w_doubleprime(const DiscreteMeasure& mu,
                              const DiscreteMeasure& nu, double p) {
  require_exponent(p);
  require_same_space(mu.space(), nu.space());
  require_subprobability(mu, false);
  require_subprobability(nu, false);
  const MetricSpace& s = mu.space();
  const std::size_t n = s.size();
  const Eigen::VectorXd b = boundary_distances(s);
  const auto src = atoms_of(mu);
  const auto dst = atoms_of(nu);

  // Nodes: sources, sinks, boundary-as-source, boundary-as-sink.
  const std::size_t ds = src.size() + dst.size();
  const std::size_t dt = ds + 1;
  lp::NetworkSimplex ns(ds + 2);
  double mu_mass = 0.0, nu_mass = 0.0;
  for (std::size_t i = 0; i < src.size(); ++i) {
    ns.set_supply(i, src[i].mass);
    mu_mass += src[i].mass;
  }
  for (std::size_t j = 0; j < dst.size(); ++j) {
    ns.set_supply(src.size() + j, -dst[j].mass);
    nu_mass += dst[j].mass;
  }
  ns.set_supply(ds, nu_mass);
  ns.set_supply(dt, -mu_mass);

  struct Arc {
    std::size_t from, to;
    double cost;
  };
  std::vector<Arc> arcs;
  for (std::size_t i = 0; i < src.size(); ++i) {
    for (std::size_t j = 0; j < dst.size(); ++j) {
      const std::size_t x = src[i].index, y = dst[j].index;
      arcs.push_back({x, y, power(std::min(s.dist(x, y), b[x] + b[y]), p)});
      ns.add_arc(i, src.size() + j, arcs.back().cost);
    }
  }
  for (std::size_t i = 0; i < src.size(); ++i) {
    arcs.push_back({src[i].index, n, power(b[src[i].index], p)});
    ns.add_arc(i, dt, arcs.back().cost);
  }
  for (std::size_t j = 0; j < dst.size(); ++j) {
    arcs.push_back({n, dst[j].index, power(b[dst[j].index], p)});
    ns.add_arc(ds, src.size() + j, arcs.back().cost);
  }
  arcs.push_back({n, n, 0.0});
  ns.add_arc(ds, dt, 0.0);
  if (ns.run() != lp::NetworkSimplex::Status::kOptimal)
    throw SolverError("boundary flow did not reach an optimum");

  TransportPlan plan;
  plan.p = p;
  for (const Atom& a : src) plan.rows.push_back(a.index);
  for (const Atom& a : dst) plan.cols.push_back(a.index);
  plan.rows.push_back(n);
  plan.cols.push_back(n);
  for (std::size_t e = 0; e + 1 < arcs.size(); ++e) {
    const double f = ns.flow(e);
    if (f <= 0.0) continue;
    plan.entries.push_back({arcs[e].from, arcs[e].to, f});
    plan.cost_value += arcs[e].cost * f;
  }
  return finish(std::move(plan));
}

}  // namespace tadist
