// One PASS/FAIL line per acceptance criterion. Exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tadist/annihilation.hpp"
#include "tadist/charged.hpp"
#include "tadist/error.hpp"
#include "tadist/heat.hpp"
#include "tadist/lp/revised_simplex.hpp"
#include "tadist/transport.hpp"

using namespace tadist;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Clock {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::size_t at(const SpacePtr& s, double x) {
  const auto i = find_coordinate(*s, x);
  if (!i) throw ConfigError("no grid node at " + std::to_string(x));
  return *i;
}

DiscreteMeasure random_interior(std::mt19937_64& rng, const SpacePtr& s,
                                double mass, double keep = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> w(s->size(), 0.0);
  double total = 0.0;
  for (std::size_t i : s->interior())
    if (u(rng) < keep) total += w[i] = u(rng);
  if (total == 0.0) total += w[s->interior()[0]] = 1.0;
  for (double& x : w) x *= mass / total;
  return DiscreteMeasure(s, w);
}

// Independent LP for W*_p(mu) = (1/2) W*_p(mu, mu): the self-coupling
// problem written out row by row and handed to the general simplex.
double annihilation_oracle(const DiscreteMeasure& mu, double p) {
  const auto supp = mu.support();
  const auto& s = mu.space();
  lp::LinearProgram prog;
  for (std::size_t i : supp) prog.add_row(lp::Sense::kEqual, mu[i]);
  for (std::size_t j : supp) prog.add_row(lp::Sense::kEqual, mu[j]);
  const int m = static_cast<int>(supp.size());
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      double best = INFINITY;
      for (std::size_t z : s.boundary())
        best = std::min(best, s.dist(supp[a], z) + s.dist(z, supp[b]));
      prog.add_column(std::pow(best, p), {{a, 1.0}, {m + b, 1.0}});
    }
  const auto sol = lp::solve(prog);
  if (sol.status != lp::LpStatus::kOptimal) throw SolverError("oracle LP failed");
  return 0.5 * std::pow(sol.objective, 1.0 / p);
}

// W'_p(mu, 0) from its closed form: every unit of mass goes to the boundary.
double wprime_zero_oracle(const DiscreteMeasure& mu, double p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i)
    acc += std::pow(boundary_distance(mu.space(), i), p) * mu[i];
  return std::pow(acc, 1.0 / p);
}

// The zig-zag configuration on Y = (-2, 2) with step 1/(2(2n+1)).
struct ZigZag {
  SpacePtr space;
  DiscreteMeasure mu, nu;
  ChargedMeasure sigma, tau;
};

ZigZag zigzag(int n) {
  const SpacePtr s = interval_space(-2.0, 2.0, 8 * (2 * n + 1) + 1);
  const double m = 1.0 / (2 * n + 1);
  auto node = [&](int k) { return at(s, k * m - 0.5); };
  std::vector<double> sp(s->size(), 0.0), sm = sp, tp = sp, tm = sp;
  for (int k = 0; k <= n; ++k) sp[node(2 * k)] += m;
  for (int k = 1; k <= n; ++k) sm[node(2 * k)] += m;
  for (int k = 0; k <= n; ++k) tp[node(2 * k + 1)] += m;
  for (int k = 0; k < n; ++k) tm[node(2 * k + 1)] += m;
  return {s, DiscreteMeasure::dirac(s, at(s, -0.5), m),
          DiscreteMeasure::dirac(s, at(s, 0.5), m),
          ChargedMeasure(DiscreteMeasure(s, sp), DiscreteMeasure(s, sm)),
          ChargedMeasure(DiscreteMeasure(s, tp), DiscreteMeasure(s, tm))};
}

Eigen::VectorXd weights_of(const MetricSpace& s) {
  return Eigen::Map<const Eigen::VectorXd>(s.weights().data(),
                                           static_cast<Eigen::Index>(s.size()));
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
  // 201 uniform nodes on [-3, 3] miss -2 and 2 (step 0.03), so both atoms are
  // inserted as extra nodes.
  std::vector<double> c;
  for (int i = 0; i <= 200; ++i) c.push_back(-3.0 + 0.03 * i);
  c.push_back(-2.0);
  c.push_back(2.0);
  std::sort(c.begin(), c.end());
  const std::size_t last = c.size() - 1;
  const SpacePtr s = line_space(c, {0, last});
  const auto a = DiscreteMeasure::dirac(s, at(s, -2.0));
  const auto b = DiscreteMeasure::dirac(s, at(s, 2.0));
  const auto zero = DiscreteMeasure::zero(s);
  Outcome o;
  double worst_err = 0.0, worst_time = 0.0;
  for (double p : {1.0, 2.0}) {
    for (int which = 0; which < 2; ++which) {
      const Clock clock;
      const double v = w0(a, which == 0 ? b : zero, p).value;
      const double t = clock.seconds();
      worst_err = std::max(worst_err, std::abs(v - (which == 0 ? 4.0 : 1.0)));
      worst_time = std::max(worst_time, t);
    }
  }
  o.pass = worst_err <= 1e-9 && worst_time < 5.0;
  o.detail = "nodes " + std::to_string(s->size()) +
             fmt(", max |err| %.2e, slowest solve %.2fs", worst_err, worst_time);
  return o;
}

Outcome criterion2() {
  const SpacePtr s = interval_space(-1.0, 1.0, 201);
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<int> pick(1, 199);
  double w0_err = 0.0, wp_err = 0.0;
  const W0Solver s1(s, 1.0), s2(s, 2.0);
  for (int k = 0; k < 20; ++k) {
    int i = pick(rng), j = pick(rng);
    while (j == i) j = pick(rng);
    const double x = s->coords()[i], y = s->coords()[j];
    const auto a = DiscreteMeasure::dirac(s, i), b = DiscreteMeasure::dirac(s, j);
    const double d = std::abs(x - y);
    w0_err = std::max(w0_err, std::abs(s1.solve(a, b).value - d));
    w0_err = std::max(w0_err, std::abs(s2.solve(a, b).value - d));
    const double expected = std::min(d, 2.0 - d);
    wp_err = std::max(wp_err, std::abs(w_prime(a, b, 1.0).value - expected));
    wp_err = std::max(wp_err, std::abs(w_prime(a, b, 2.0).value - expected));
  }
  return {w0_err <= 1e-9 && wp_err <= 1e-9,
          fmt("20 pairs, p=1,2: max |W0 - |x-y|| %.2e, max |W' - min| %.2e",
              w0_err, wp_err)};
}

Outcome criterion3() {
  const auto z = zigzag(1);
  const double v0 = w0(z.mu, z.nu, 2.0).value;
  const double vp = w_prime(z.mu, z.nu, 2.0).value;
  const double vt = tilde_w(z.sigma, z.tau, 2.0).value;
  const bool ok = v0 <= 1.0 / 3.0 + 1e-9 &&
                  std::abs(vp - std::sqrt(1.0 / 3.0)) <= 1e-9 &&
                  vp - v0 > 1e-3 && std::abs(vt * vt - 1.0 / 9.0) <= 1e-9;
  return {ok, fmt("W0 %.10f <= 1/3, W' %.10f, gap %.4f, W~^2 %.10f", v0, vp,
                  vp - v0, vt * vt)};
}

Outcome criterion4() {
  auto measure = [](double eps) {
    const SpacePtr s = line_space({0.0, eps, 1.0, 2.0}, {0, 3});
    std::vector<double> w(4, 0.0);
    w[1] = w[2] = 0.5;
    return DiscreteMeasure(s, w);
  };
  const auto mu = measure(0.1);
  const double wz = w_prime_zero(mu, 2.0);
  const double ac = annihilation_cost(mu, 2.0);
  std::vector<double> ratios;
  for (double eps : {0.1, 0.01, 0.001}) {
    const auto m = measure(eps);
    ratios.push_back(annihilation_cost(m, 2.0) / w_prime_zero(m, 2.0));
  }
  const double limit = std::sqrt(0.5);
  const bool monotone = ratios[0] > ratios[1] && ratios[1] > ratios[2] &&
                        ratios[2] > limit;
  const bool approach = (ratios[2] - limit) < (ratios[0] - limit) / 50;
  const bool ok = std::abs(wz * wz - 0.505) <= 1e-9 && std::abs(ac - 0.55) <= 1e-9 &&
                  monotone && approach;
  return {ok, fmt("W'^2 %.12f, W* %.12f, ratios %.6f %.6f", wz * wz, ac,
                  ratios[0], ratios[2]) +
                  fmt(" -> %.6f", limit)};
}

Outcome criterion5() {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const SpacePtr s = line_space(
      {0.0, 0.07, 0.18, 0.25, 0.4, 0.46, 0.61, 0.7, 0.83, 0.9, 1.0}, {0, 10});
  double rel = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto mu = random_interior(rng, s, u(rng), 0.5);
    const auto nu = random_interior(rng, s, u(rng), 0.5);
    const double a = w0(mu, nu, 1.0).value, b = w0_rep_p1(mu, nu);
    rel = std::max(rel, std::abs(a - b) / std::max(1e-12, std::abs(a)));
  }
  double nine = 0.0;
  for (double p : {1.0, 2.0})
    for (int k = 0; k < 20; ++k) {
      const auto mu = random_interior(rng, s, u(rng), 0.5);
      const auto nu = random_interior(rng, s, u(rng), 0.5);
      W0Options opt;
      opt.formulation = W0Formulation::kCoupling;
      const double a = w0(mu, nu, p, opt).value, b = w0_nine_term(mu, nu, p).value;
      nine = std::max(nine, std::abs(a - b) / std::max(1e-12, std::abs(a)));
    }
  return {rel <= 1e-7 && nine <= 1e-7,
          fmt("50 pairs rep vs W0_1 rel %.2e; 40 nine-term vs coupling rel %.2e",
              rel, nine)};
}

Outcome criterion6() {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const SpacePtr s = line_space(
      {0.0, 0.1, 0.23, 0.3, 0.47, 0.5, 0.66, 0.72, 0.9, 1.3}, {0, 9});
  double slack_lo = INFINITY, slack_hi = INFINITY, eq1 = 0.0, impl = 0.0;
  for (int k = 0; k < 50; ++k) {
    const auto mu = random_interior(rng, s, u(rng), 0.6);
    for (double p : {1.0, 1.5, 2.0, 3.0}) {
      const double star = annihilation_oracle(mu, p);
      const double wz = wprime_zero_oracle(mu, p);
      impl = std::max(impl, std::abs(star - annihilation_cost(mu, p)));
      impl = std::max(impl, std::abs(wz - w_prime_zero(mu, p)));
      slack_lo = std::min(slack_lo, star - std::pow(2.0, -1.0 + 1.0 / p) * wz);
      slack_hi = std::min(slack_hi, wz - star);
      if (p == 1.0) eq1 = std::max(eq1, std::abs(star - wz));
    }
  }
  return {slack_lo >= -1e-10 && slack_hi >= -1e-10 && eq1 <= 1e-10 && impl <= 1e-9,
          fmt("min lower slack %.2e, min upper slack %.2e, p=1 gap %.2e, "
              "library vs oracle %.2e",
              slack_lo, slack_hi, eq1, impl)};
}

Outcome criterion7() {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const SpacePtr s = interval_space(0.0, 1.0, 21);
  double flat = 0.0;
  for (int k = 0; k < 20; ++k) {
    const auto mu = random_interior(rng, s, u(rng), 0.4);
    const auto nu = random_interior(rng, s, u(rng), 0.4);
    const double f =
        w_flat_upper(mu, nu, 1.0, FlatStrategy::kBoundaryAnnihilation, 64).value;
    flat = std::max(flat, std::abs(f - w_prime(mu, nu, 1.0).value));
  }
  bool order = true;
  std::string zz;
  for (int n = 1; n <= 3; ++n) {
    const auto z = zigzag(n);
    const double w1 = w_prime(z.mu, z.nu, 1.0).value;
    const double w0v = w0(z.mu, z.nu, 2.0).value;
    const Bounds b = w_sharp_bounds(z.mu, z.nu, 2.0);
    order = order && w1 <= w0v + 1e-9 && b.lower <= b.upper &&
            b.upper - b.lower > 1e-6 && std::abs(b.lower - w1) <= 1e-9;
    zz += fmt(" n=%.0f:[%.4f,%.4f]", n, b.lower, b.upper);
  }
  return {flat <= 1e-3 && order,
          fmt("20 pairs max |Wflat_up - W'_1| %.2e;", flat) + zz};
}

Outcome criterion8() {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto base = build_interval_system(0.0, 1.0, 101);
  const GluedSpace g = glue(base.space_ptr(), 2);
  const auto gs = build_glued_system(base, g);
  double gap = 0.0, res = 0.0;
  for (int k = 0; k < 20; ++k) {
    Eigen::VectorXd a(g.size()), b(g.size());
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    for (double t : {0.01, 0.1, 1.0}) {
      gap = std::max(gap, (glued_semigroup_apply(base, g, a, t) -
                           glued_direct_apply(gs, a, t))
                              .cwiseAbs()
                              .maxCoeff());
      res = std::max(res, glued_dirichlet_form(base, g, a, b, t).residual());
    }
  }
  return {gap <= 1e-9 && res <= 1e-9,
          fmt("max semigroup gap %.2e, max form residual %.2e", gap, res)};
}

Outcome criterion9() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto sys = build_interval_system(0.0, 1.0, 101);
  const auto sp = sys.space_ptr();
  const GluedSpace g = glue(sp, 2);
  double flow = 0.0, round = 0.0, ent = 0.0;
  for (int k = 0; k < 5; ++k) {
    std::vector<double> a(101), b(101);
    for (auto& x : a) x = u(rng);
    for (auto& x : b) x = u(rng);
    b[0] = a[0];
    b[100] = a[100];
    double sum = 0.0;
    for (int i = 0; i < 101; ++i) sum += a[i] + b[i];
    for (auto& x : a) x /= sum;
    for (auto& x : b) x /= sum;
    const ChargedMeasure s(DiscreteMeasure(sp, a), DiscreteMeasure(sp, b));
    for (double t : {0.01, 0.1, 1.0}) {
      const auto st = charged_flow(s, t, sys);
      // Oracle: the kernels applied to the effective and total measures.
      const Eigen::MatrixXd k0 = sys.kernel(t, Flavor::kDirichlet);
      const Eigen::MatrixXd k1 = sys.kernel(t, Flavor::kNeumann);
      const auto e = effective(s);
      const auto tot = total(s);
      for (int y = 0; y < 101; ++y) {
        double pe = 0.0, pt = 0.0;
        for (int x = 0; x < 101; ++x) {
          pe += e[x] * k0(x, y);
          pt += tot[x] * k1(x, y);
        }
        flow = std::max(flow, std::abs(effective(st)[y] - pe));
        flow = std::max(flow, std::abs(total(st)[y] - pt));
      }
    }
    const auto back = psi(phi(s, g), g);
    for (int i = 0; i < 101; ++i) {
      round = std::max(round, std::abs(back.plus()[i] - a[i]));
      round = std::max(round, std::abs(back.minus()[i] - b[i]));
    }
    ent = std::max(ent, std::abs(charged_entropy(s) - entropy(phi(s, g)) -
                                 std::log(0.5)));
  }
  return {flow <= 1e-10 && round <= 1e-12 && ent <= 1e-10,
          fmt("flow %.2e, round trip %.2e, entropy constant %.2e", flow, round,
              ent)};
}

Outcome criterion10() {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto sys = build_interval_system(0.0, 1.0, 401);
  const Clock clock;
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto mu = random_interior(rng, sys.space_ptr(), u(rng));
    const auto nu = random_interior(rng, sys.space_ptr(), u(rng));
    const auto rows =
        contraction_experiment(mu, nu, 1.0, {0.0, 0.05, 0.1, 0.2, 0.4}, sys);
    for (std::size_t j = 1; j < rows.size(); ++j)
      worst = std::max(worst, rows[j].quantity - rows[j - 1].quantity);
  }
  const double t = clock.seconds();
  return {worst <= 1e-6 && t < 120.0,
          fmt("max increase %.2e over 10 pairs, %.1fs", worst, t)};
}

Outcome criterion11() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto sys = build_interval_system(0.0, 1.0, 81);
  const Eigen::VectorXd w = weights_of(sys.space());
  double sym = 0.0, law = 0.0, markov = 0.0, dom = 0.0, mono = 0.0;
  for (Flavor fl : {Flavor::kNeumann, Flavor::kDirichlet}) {
    for (double t : {0.01, 0.1, 1.0}) {
      const Eigen::MatrixXd k = sys.kernel(t, fl);
      // Reversibility: w_x p_t(x,y) = w_y p_t(y,x).
      const Eigen::MatrixXd flux = w.asDiagonal() * k;
      sym = std::max(sym, (flux - flux.transpose()).cwiseAbs().maxCoeff());
      const Eigen::MatrixXd k2 = sys.kernel(t / 3, fl) * sys.kernel(2 * t / 3, fl);
      law = std::max(law, (k2 - k).cwiseAbs().maxCoeff());
      markov = std::max(markov, std::max(0.0, -k.minCoeff()));
      const Eigen::VectorXd rows = k.rowwise().sum();
      if (fl == Flavor::kNeumann)
        markov = std::max(markov, (rows.array() - 1.0).abs().maxCoeff());
      else
        markov = std::max(markov, std::max(0.0, rows.maxCoeff() - 1.0));
    }
  }
  for (double t : {0.01, 0.1, 1.0})
    dom = std::max(dom, (sys.kernel(t, Flavor::kDirichlet) -
                         sys.kernel(t, Flavor::kNeumann))
                            .maxCoeff());
  for (int k = 0; k < 10; ++k) {
    const auto mu = random_interior(rng, sys.space_ptr(), u(rng));
    double prev = mu.mass();
    for (double t : {0.01, 0.05, 0.1, 0.5, 1.0}) {
      const double m = apply_measure_flow(sys, mu, t, Flavor::kDirichlet).mass();
      mono = std::max(mono, m - prev);
      prev = m;
      mono = std::max(mono, std::abs(
          apply_measure_flow(sys, mu, t, Flavor::kNeumann).mass() - mu.mass()));
    }
  }
  const double worst = std::max({sym, law, markov, dom, mono});
  return {worst <= 1e-10,
          fmt("symmetry %.1e, law %.1e, markov %.1e, domination %.1e", sym, law,
              markov, dom) +
              fmt(", mass %.1e", mono)};
}

// Values observed when the experiment was first run; a change beyond the
// tolerance below signals a regression in the generator or the reports.
struct Locked {
  int mode;
  double grad;
  double bochner;
};
constexpr Locked kLocked[] = {
    {1, 0.0, 1.178060910418826},  // continuum value 3 pi / 8
    {2, 0.0, 12.565853852644148},
    {3, 0.0, 63.611365132440795},
};

Outcome criterion12() {
  const auto sys = build_interval_system(0.0, M_PI, 401);
  const auto c = sys.space().coords();
  const double mesh = sys.mesh();
  bool ok = true;
  std::string detail;
  for (const Locked& lock : kLocked) {
    Eigen::VectorXd f(401), bump(401);
    for (int i = 0; i < 401; ++i) {
      f[i] = std::sin(lock.mode * c[i]);
      bump[i] = std::sin(c[i]) * std::sin(c[i]);
    }
    f[0] = f[400] = 0.0;
    double grad = 0.0;
    for (double t : {0.01, 0.1, 1.0})
      grad = std::max(grad, gradient_estimate_check(f, t, 2.0, 0.0, sys).max_violation);
    const double boch = bochner_check(f, bump, 2.0, 0.0, sys).residual;
    ok = ok && grad <= 5 * mesh && boch >= -5 * mesh &&
         std::abs(grad - lock.grad) <= 1e-9 &&
         std::abs(boch - lock.bochner) <= 1e-9 * std::max(1.0, std::abs(boch));
    detail += fmt(" mode %.0f: grad %.3e bochner %.6e;", lock.mode, grad, boch);
  }
  return {ok, fmt("mesh %.3e;", mesh) + detail};
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria = {
      criterion1, criterion2, criterion3, criterion4,  criterion5,  criterion6,
      criterion7, criterion8, criterion9, criterion10, criterion11, criterion12};
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i]();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %zu: %s\n", o.pass ? "PASS" : "FAIL", i + 1,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
