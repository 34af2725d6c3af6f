#include "tadist/heat.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "tadist/annihilation.hpp"
#include "tadist/error.hpp"

namespace tadist {

namespace {

void require_time(double t) {
  if (!std::isfinite(t) || t < 0.0)
    throw DomainError("time must be finite and nonnegative");
}

void require_on(const HeatSystem& sys, const MetricSpace& space) {
  if (&sys.space() != &space)
    throw ConfigError("measure or function does not live on the system's space");
}

void require_size(const HeatSystem& sys, const Eigen::VectorXd& f) {
  if (static_cast<std::size_t>(f.size()) != sys.size())
    throw ConfigError("function does not match the system's space");
}

void require_zero_on_boundary(const HeatSystem& sys, const Eigen::VectorXd& f) {
  const double scale = 1.0 + f.cwiseAbs().maxCoeff();
  for (std::size_t z : sys.space().boundary())
    if (std::abs(f[static_cast<Eigen::Index>(z)]) > 1e-12 * scale)
      throw DomainError("function must vanish on the boundary set");
}

Eigen::VectorXd weights_of(const MetricSpace& s) {
  return Eigen::Map<const Eigen::VectorXd>(s.weights().data(),
                                           static_cast<Eigen::Index>(s.size()));
}

Eigen::VectorXd vec(std::span<const double> v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

/// Measure flow on raw weights: w * P_t(m / w).
Eigen::VectorXd flow_weights(const HeatSystem& sys, const Eigen::VectorXd& m,
                             double t, Flavor flavor) {
  const Eigen::VectorXd w = weights_of(sys.space());
  return w.cwiseProduct(sys.apply(m.cwiseQuotient(w), t, flavor));
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

Eigen::VectorXd without_boundary(const MetricSpace& s, Eigen::VectorXd f) {
  for (std::size_t z : s.boundary()) f[static_cast<Eigen::Index>(z)] = 0.0;
  return f;
}

}  // namespace

HeatSystem::HeatSystem(SpacePtr space, Eigen::MatrixXd conductance, double mesh)
    : space_(std::move(space)),
      conductance_(std::move(conductance)),
      mesh_(mesh) {
  if (!space_) throw ConfigError("heat system needs a space");
  const auto n = static_cast<Eigen::Index>(space_->size());
  if (conductance_.rows() != n || conductance_.cols() != n)
    throw ConfigError("conductance matrix does not match the space");
  if (!conductance_.allFinite() || conductance_.minCoeff() < 0.0)
    throw ConfigError("conductances must be finite and nonnegative");
  const double cmax = std::max(1.0, conductance_.maxCoeff());
  if ((conductance_ - conductance_.transpose()).cwiseAbs().maxCoeff() >
      1e-12 * cmax)
    throw ConfigError("conductance matrix must be symmetric");
  if (!std::isfinite(mesh_) || mesh_ < 0.0)
    throw ConfigError("mesh must be finite and nonnegative");
  conductance_.diagonal().setZero();
  conductance_ = 0.5 * (conductance_ + conductance_.transpose()).eval();

  const Eigen::VectorXd w = weights_of(*space_);
  sqrt_w_ = w.cwiseSqrt();
  const Eigen::VectorXd degree = conductance_.rowwise().sum();
  generator_ = w.cwiseInverse().asDiagonal() * conductance_;
  generator_.diagonal() = -degree.cwiseQuotient(w);

  auto factor = [&](std::vector<std::size_t> support) {
    Spectrum sp;
    const auto m = static_cast<Eigen::Index>(support.size());
    Eigen::MatrixXd s(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      const auto i = static_cast<Eigen::Index>(support[a]);
      for (Eigen::Index b = 0; b < m; ++b) {
        const auto j = static_cast<Eigen::Index>(support[b]);
        s(a, b) = i == j ? -degree[i] / w[i]
                         : conductance_(i, j) / (sqrt_w_[i] * sqrt_w_[j]);
      }
    }
    sp.support = std::move(support);
    if (m > 0) {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
      if (es.info() != Eigen::Success)
        throw SolverError("eigendecomposition of the generator failed");
      sp.lambda = es.eigenvalues();
      sp.vectors = es.eigenvectors();
    }
    return sp;
  };
  std::vector<std::size_t> all(space_->size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  neumann_ = factor(std::move(all));
  dirichlet_ = factor({space_->interior().begin(), space_->interior().end()});
}

Eigen::MatrixXd HeatSystem::generator0() const {
  Eigen::MatrixXd l = generator_;
  for (std::size_t z : space_->boundary()) {
    l.row(static_cast<Eigen::Index>(z)).setZero();
    l.col(static_cast<Eigen::Index>(z)).setZero();
  }
  return l;
}

const HeatSystem::Spectrum& HeatSystem::spectrum(Flavor flavor) const {
  return flavor == Flavor::kNeumann ? neumann_ : dirichlet_;
}

const Eigen::VectorXd& HeatSystem::eigenvalues(Flavor flavor) const {
  return spectrum(flavor).lambda;
}

Eigen::VectorXd HeatSystem::apply(const Eigen::VectorXd& f, double t,
                                  Flavor flavor) const {
  require_time(t);
  require_size(*this, f);
  const Spectrum& sp = spectrum(flavor);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(f.size());
  const auto m = static_cast<Eigen::Index>(sp.support.size());
  if (m == 0) return out;
  if (t == 0.0) {
    for (std::size_t i : sp.support)
      out[static_cast<Eigen::Index>(i)] = f[static_cast<Eigen::Index>(i)];
    return out;
  }
  Eigen::VectorXd g(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    const auto i = static_cast<Eigen::Index>(sp.support[a]);
    g[a] = sqrt_w_[i] * f[i];
  }
  Eigen::VectorXd c = sp.vectors.transpose() * g;
  for (Eigen::Index a = 0; a < m; ++a) c[a] *= std::exp(t * sp.lambda[a]);
  g.noalias() = sp.vectors * c;
  for (Eigen::Index a = 0; a < m; ++a) {
    const auto i = static_cast<Eigen::Index>(sp.support[a]);
    out[i] = g[a] / sqrt_w_[i];
  }
  return out;
}

Eigen::MatrixXd HeatSystem::kernel(double t, Flavor flavor) const {
  require_time(t);
  const Spectrum& sp = spectrum(flavor);
  const auto n = static_cast<Eigen::Index>(size());
  const auto m = static_cast<Eigen::Index>(sp.support.size());
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  if (m == 0) return k;
  const Eigen::VectorXd e = (t * sp.lambda.array()).exp().matrix();
  const Eigen::MatrixXd s = sp.vectors * e.asDiagonal() * sp.vectors.transpose();
  for (Eigen::Index a = 0; a < m; ++a) {
    const auto i = static_cast<Eigen::Index>(sp.support[a]);
    for (Eigen::Index b = 0; b < m; ++b) {
      const auto j = static_cast<Eigen::Index>(sp.support[b]);
      k(i, j) = s(a, b) * sqrt_w_[j] / sqrt_w_[i];
    }
  }
  return k;
}

HeatSystem build_interval_system(double a, double b, std::size_t n_points) {
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b) || n_points < 3)
    throw ConfigError("degenerate interval: need a < b and at least 3 points");
  SpacePtr space = interval_space(a, b, n_points);
  const double h = (b - a) / static_cast<double>(n_points - 1);
  const auto n = static_cast<Eigen::Index>(n_points);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i + 1 < n; ++i) c(i, i + 1) = c(i + 1, i) = 1.0 / h;
  return HeatSystem(std::move(space), std::move(c), h);
}

HeatSystem build_graph_system(SpacePtr space) {
  if (!space || space->size() < 2)
    throw ConfigError("graph system needs at least two points");
  const auto n = static_cast<Eigen::Index>(space->size());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  double mesh = 0.0;
  for (auto [i, j] : irreducible_edges(*space)) {
    const double d = space->dist(i, j);
    const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
    c(a, b) = c(b, a) = 1.0 / d;
    mesh = std::max(mesh, d);
  }
  return HeatSystem(std::move(space), std::move(c), mesh);
}

HeatSystem build_glued_system(const HeatSystem& sys, const GluedSpace& g) {
  if (&g.base() != &sys.space())
    throw ConfigError("glued space is not built on the system's space");
  const auto m = static_cast<Eigen::Index>(g.size());
  const double k = static_cast<double>(g.sheets());
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      const int sa = g.sheet_of(a), sb = g.sheet_of(b);
      const double base =
          sys.conductance()(static_cast<Eigen::Index>(g.base_of(a)),
                            static_cast<Eigen::Index>(g.base_of(b)));
      if (sa == kSharedSheet && sb == kSharedSheet)
        c(a, b) = base;
      else if (sa == sb || sa == kSharedSheet || sb == kSharedSheet)
        c(a, b) = base / k;
    }
  }
  return HeatSystem(g.space_ptr(), std::move(c), sys.mesh());
}

Eigen::VectorXd apply_heat(const HeatSystem& sys, const Eigen::VectorXd& f,
                           double t, Flavor flavor) {
  return sys.apply(f, t, flavor);
}

DiscreteMeasure apply_measure_flow(const HeatSystem& sys,
                                   const DiscreteMeasure& mu, double t,
                                   Flavor flavor) {
  require_on(sys, mu.space());
  Eigen::VectorXd out = flow_weights(sys, vec(mu.weights()), t, flavor);
  // Positivity holds exactly; clear rounding noise before validation.
  for (Eigen::Index i = 0; i < out.size(); ++i) out[i] = std::max(out[i], 0.0);
  return DiscreteMeasure(mu.space_ptr(), to_std(out));
}

SignedMeasure apply_measure_flow(const HeatSystem& sys, const SignedMeasure& mu,
                                 double t, Flavor flavor) {
  require_on(sys, mu.space());
  return SignedMeasure(mu.space_ptr(),
                       to_std(flow_weights(sys, vec(mu.weights()), t, flavor)));
}

std::vector<Eigen::VectorXd> glued_semigroup_apply(
    const HeatSystem& base, const std::vector<Eigen::VectorXd>& sheets,
    double t) {
  require_time(t);
  if (sheets.size() < 2) throw ConfigError("gluing needs at least two sheets");
  for (const auto& u : sheets) require_size(base, u);
  double scale = 1.0;
  for (const auto& u : sheets) scale = std::max(scale, u.cwiseAbs().maxCoeff());
  for (std::size_t z : base.space().boundary()) {
    const auto i = static_cast<Eigen::Index>(z);
    for (const auto& u : sheets)
      if (std::abs(u[i] - sheets.front()[i]) > 1e-12 * scale)
        throw DomainError("sheet functions disagree on the boundary set");
  }
  Eigen::VectorXd mean = Eigen::VectorXd::Zero(sheets.front().size());
  for (const auto& u : sheets) mean += u;
  mean /= static_cast<double>(sheets.size());
  const Eigen::VectorXd common = base.apply(mean, t, Flavor::kNeumann);
  std::vector<Eigen::VectorXd> out;
  out.reserve(sheets.size());
  for (const auto& u : sheets)
    out.push_back(common + base.apply(u - mean, t, Flavor::kDirichlet));
  return out;
}

Eigen::VectorXd glued_semigroup_apply(const HeatSystem& base,
                                      const GluedSpace& g,
                                      const Eigen::VectorXd& u, double t) {
  if (&g.base() != &base.space())
    throw ConfigError("glued space is not built on the system's space");
  if (static_cast<std::size_t>(u.size()) != g.size())
    throw ConfigError("function does not match the glued space");
  const std::size_t n = base.size();
  std::vector<Eigen::VectorXd> sheets(g.sheets(), Eigen::VectorXd(n));
  for (std::size_t i = 0; i < g.sheets(); ++i)
    for (std::size_t x = 0; x < n; ++x)
      sheets[i][static_cast<Eigen::Index>(x)] =
          u[static_cast<Eigen::Index>(g.index(i, x))];
  const auto flowed = glued_semigroup_apply(base, sheets, t);
  Eigen::VectorXd out(u.size());
  for (std::size_t a = 0; a < g.size(); ++a) {
    const int s = g.sheet_of(a);
    out[static_cast<Eigen::Index>(a)] =
        flowed[s == kSharedSheet ? 0 : static_cast<std::size_t>(s)]
              [static_cast<Eigen::Index>(g.base_of(a))];
  }
  return out;
}

Eigen::VectorXd glued_direct_apply(const HeatSystem& glued,
                                   const Eigen::VectorXd& u, double t) {
  return glued.apply(u, t, Flavor::kNeumann);
}

double approx_dirichlet_form(const HeatSystem& sys, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& v, double t,
                             Flavor flavor) {
  if (!std::isfinite(t) || t <= 0.0)
    throw DomainError("approximate Dirichlet form needs t > 0");
  require_size(sys, v);
  const Eigen::VectorXd w = weights_of(sys.space());
  const Eigen::VectorXd diff = sys.apply(u, t, flavor) - u;
  return -v.cwiseProduct(w).dot(diff) / t;
}

double GluedFormCheck::residual() const { return std::abs(glued - decomposed); }

GluedFormCheck glued_dirichlet_form(const HeatSystem& base, const GluedSpace& g,
                                    const Eigen::VectorXd& u,
                                    const Eigen::VectorXd& v, double t) {
  if (!std::isfinite(t) || t <= 0.0)
    throw DomainError("approximate Dirichlet form needs t > 0");
  if (static_cast<std::size_t>(v.size()) != g.size())
    throw ConfigError("function does not match the glued space");
  GluedFormCheck out;
  const Eigen::VectorXd w = weights_of(g.space());
  out.glued = -v.cwiseProduct(w).dot(glued_semigroup_apply(base, g, u, t) - u) / t;

  const std::size_t n = base.size(), k = g.sheets();
  auto sheet = [&](const Eigen::VectorXd& f, std::size_t i) {
    Eigen::VectorXd s(n);
    for (std::size_t x = 0; x < n; ++x)
      s[static_cast<Eigen::Index>(x)] = f[static_cast<Eigen::Index>(g.index(i, x))];
    return s;
  };
  Eigen::VectorXd ubar = Eigen::VectorXd::Zero(n), vbar = ubar;
  for (std::size_t i = 0; i < k; ++i) {
    ubar += sheet(u, i);
    vbar += sheet(v, i);
  }
  ubar /= static_cast<double>(k);
  vbar /= static_cast<double>(k);
  out.decomposed = approx_dirichlet_form(base, ubar, vbar, t, Flavor::kNeumann);
  for (std::size_t i = 0; i < k; ++i) {
    const Eigen::VectorXd ui = without_boundary(base.space(), sheet(u, i) - ubar);
    const Eigen::VectorXd vi = without_boundary(base.space(), sheet(v, i) - vbar);
    out.decomposed += approx_dirichlet_form(base, ui, vi, t, Flavor::kDirichlet) /
                      static_cast<double>(k);
  }
  return out;
}

ChargedMeasure charged_flow(const ChargedMeasure& s, double t,
                            const HeatSystem& sys) {
  require_time(t);
  require_on(sys, s.space());
  const Eigen::VectorXd plus = vec(s.plus().weights());
  const Eigen::VectorXd minus = vec(s.minus().weights());
  const Eigen::VectorXd sym =
      flow_weights(sys, 0.5 * (plus + minus), t, Flavor::kNeumann);
  const Eigen::VectorXd anti =
      flow_weights(sys, 0.5 * (plus - minus), t, Flavor::kDirichlet);
  Eigen::VectorXd p = sym + anti, m = sym - anti;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    p[i] = std::max(p[i], 0.0);
    m[i] = std::max(m[i], 0.0);
  }
  return ChargedMeasure(DiscreteMeasure(s.space_ptr(), to_std(p)),
                        DiscreteMeasure(s.space_ptr(), to_std(m)));
}

Eigen::VectorXd carre_du_champ(const HeatSystem& sys, const Eigen::VectorXd& g,
                               const Eigen::VectorXd& h) {
  require_size(sys, g);
  require_size(sys, h);
  const Eigen::MatrixXd& c = sys.conductance();
  const auto n = c.rows();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n);
  for (Eigen::Index x = 0; x < n; ++x) {
    double acc = 0.0;
    for (Eigen::Index y = 0; y < n; ++y)
      if (c(x, y) != 0.0) acc += c(x, y) * (g[y] - g[x]) * (h[y] - h[x]);
    out[x] = 0.5 * acc / sys.space().weight(static_cast<std::size_t>(x));
  }
  return out;
}

Eigen::VectorXd carre_du_champ(const HeatSystem& sys, const Eigen::VectorXd& g) {
  return carre_du_champ(sys, g, g);
}

std::vector<ExperimentRow> contraction_experiment(
    const DiscreteMeasure& mu0, const DiscreteMeasure& nu0, double p,
    const std::vector<double>& times, const HeatSystem& sys, double K) {
  require_on(sys, mu0.space());
  require_on(sys, nu0.space());
  require_subprobability(mu0, true);
  require_subprobability(nu0, true);
  for (double t : times) require_time(t);
  W0Options opts;
  opts.with_plan = false;
  const W0Solver solver(sys.space_ptr(), p, opts);
  const double start = solver.solve(mu0, nu0).value;
  std::vector<ExperimentRow> rows;
  for (double t : times) {
    const auto mu = apply_measure_flow(sys, mu0, t, Flavor::kDirichlet);
    const auto nu = apply_measure_flow(sys, nu0, t, Flavor::kDirichlet);
    ExperimentRow r;
    r.t = t;
    r.quantity = t == 0.0 ? start : solver.solve(mu, nu).value;
    r.bound = std::exp(-K * t) * start;
    r.violation = std::max(0.0, r.quantity - r.bound);
    r.anchor = "w0-contraction";
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<ExperimentRow> charged_contraction_experiment(
    const ChargedMeasure& s0, const ChargedMeasure& r0, double p,
    const std::vector<double>& times, const HeatSystem& sys, double K) {
  require_on(sys, s0.space());
  require_on(sys, r0.space());
  for (double t : times) require_time(t);
  const GluedSpace g = glue(sys.space_ptr(), 2);
  const double start = tilde_w(s0, r0, p, g).value;
  std::vector<ExperimentRow> rows;
  for (double t : times) {
    ExperimentRow r;
    r.t = t;
    r.quantity =
        tilde_w(charged_flow(s0, t, sys), charged_flow(r0, t, sys), p, g).value;
    r.bound = std::exp(-K * t) * start;
    r.violation = std::max(0.0, r.quantity - r.bound);
    r.anchor = "charged-contraction";
    rows.push_back(std::move(r));
  }
  return rows;
}

GradientReport gradient_estimate_check(const Eigen::VectorXd& f, double t,
                                       double p, double K,
                                       const HeatSystem& sys) {
  require_time(t);
  require_exponent(p);
  require_size(sys, f);
  require_zero_on_boundary(sys, f);
  GradientReport rep;
  rep.mesh = sys.mesh();
  const double half = 0.5 * p;
  rep.lhs = carre_du_champ(sys, sys.apply(f, t, Flavor::kDirichlet))
                .array()
                .pow(half)
                .matrix();
  const Eigen::VectorXd grad = carre_du_champ(sys, f).array().pow(half).matrix();
  rep.rhs = std::exp(-K * p * t) * sys.apply(grad, t, Flavor::kNeumann);
  rep.max_violation = std::max(0.0, (rep.lhs - rep.rhs).maxCoeff());
  return rep;
}

BochnerReport bochner_check(const Eigen::VectorXd& f, const Eigen::VectorXd& phi,
                            double p, double K, const HeatSystem& sys) {
  if (!std::isfinite(p) || p < 1.0 || p > 2.0)
    throw DomainError("Bochner check needs p in [1, 2]");
  require_size(sys, f);
  require_size(sys, phi);
  require_zero_on_boundary(sys, f);
  if (!phi.allFinite() || phi.minCoeff() < 0.0)
    throw DomainError("test function phi must be finite and nonnegative");
  const Eigen::VectorXd w = weights_of(sys.space());
  const Eigen::VectorXd g2 = carre_du_champ(sys, f);
  const Eigen::VectorXd gp = g2.array().pow(0.5 * p).matrix();
  const Eigen::VectorXd lphi = sys.generator() * phi;
  const Eigen::VectorXd l0f =
      without_boundary(sys.space(), sys.generator() * f);
  const Eigen::VectorXd pair = carre_du_champ(sys, f, l0f);
  const double floor = 1e-14 * std::max(g2.maxCoeff(), 0.0);

  BochnerReport rep;
  rep.mesh = sys.mesh();
  double second = 0.0;
  for (Eigen::Index x = 0; x < f.size(); ++x) {
    if (g2[x] <= floor) continue;
    second += phi[x] * std::pow(g2[x], 0.5 * p - 1.0) * pair[x] * w[x];
  }
  rep.lhs = lphi.cwiseProduct(gp).dot(w) / p - second;
  rep.rhs = K * phi.cwiseProduct(gp).dot(w);
  rep.residual = rep.lhs - rep.rhs;
  return rep;
}

std::vector<ExperimentRow> evi_residual(const ChargedMeasure& s0,
                                        const ChargedMeasure& tau,
                                        const std::vector<double>& times,
                                        double K, const HeatSystem& sys,
                                        double dt) {
  require_on(sys, s0.space());
  require_on(sys, tau.space());
  if (!std::isfinite(dt) || dt <= 0.0)
    throw DomainError("finite-difference step must be positive");
  for (double t : times) require_time(t);
  const GluedSpace g = glue(sys.space_ptr(), 2);
  const double ent_tau = charged_entropy(tau);
  if (!std::isfinite(ent_tau) || !std::isfinite(charged_entropy(s0)))
    throw DomainError("entropy must be finite");
  auto half_sq = [&](const ChargedMeasure& s) {
    const double d = tilde_w(s, tau, 2.0, g).value;
    return 0.5 * d * d;
  };
  std::vector<ExperimentRow> rows;
  for (double t : times) {
    const ChargedMeasure st = charged_flow(s0, t, sys);
    const double f0 = half_sq(st);
    const double f1 = half_sq(charged_flow(s0, t + dt, sys));
    ExperimentRow r;
    r.t = t;
    r.quantity = (f1 - f0) / dt + K * f0 - (ent_tau - charged_entropy(st));
    r.bound = 0.0;
    r.violation = std::max(0.0, r.quantity);
    r.anchor = "evi";
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace tadist
