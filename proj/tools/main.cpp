#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "paper_examples.hpp"
#include "tadist/annihilation.hpp"
#include "tadist/charged.hpp"
#include "tadist/error.hpp"
#include "tadist/heat.hpp"
#include "tadist/io.hpp"
#include "tadist/transport.hpp"

using namespace tadist;
using io::json;

namespace {

constexpr int kPass = 0;
constexpr int kAssertion = 1;
constexpr int kConfig = 2;

struct Args {
  std::string space, mu, nu, out, plan, only, flavor = "neumann", phi = "bump";
  double p = 1.0, K = 0.0, dt = 1e-3;
  std::vector<double> times;
  std::vector<std::string> metrics;
  std::vector<int> modes{1, 2, 3};
  std::optional<double> tolerance;
  std::uint64_t seed = 1;
  int steps = 64;
  bool list = false;
};

void emit(const Args& a, const std::string& text) {
  if (a.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(a.out);
  if (!f) throw ConfigError("cannot write " + a.out);
  f << text;
}

std::string need(const std::string& v, const char* flag) {
  if (v.empty()) throw ConfigError(std::string("missing required option ") + flag);
  return v;
}

void check_times(const std::vector<double>& times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || times[i] < 0.0)
      throw ConfigError("times must be finite and nonnegative");
    if (i > 0 && times[i] < times[i - 1])
      throw ConfigError("times must be sorted");
  }
}

ChargedMeasure charged_or_lift(const json& spec, const SpacePtr& s) {
  return io::is_charged(spec) ? io::parse_charged(spec, s)
                              : lift(io::parse_measure(spec, s));
}

json plan_json(const TransportPlan& plan) {
  json entries = json::array();
  for (const PlanEntry& e : plan.entries) entries.push_back({e.from, e.to, e.mass});
  return entries;
}

int cmd_dist(const Args& a) {
  const SpacePtr s = io::parse_space(io::load_json(need(a.space, "--space")));
  const json mj = io::load_json(need(a.mu, "--mu"));
  const json nj = io::load_json(need(a.nu, "--nu"));
  json out = json::object();
  std::optional<TransportPlan> plan;
  auto keep = [&](const TransportPlan& p) {
    if (!plan) plan = p;
  };

  if (io::is_charged(mj) || io::is_charged(nj)) {
    const auto sigma = charged_or_lift(mj, s);
    const auto tau = charged_or_lift(nj, s);
    for (const auto& m : a.metrics.empty() ? std::vector<std::string>{"W~"} : a.metrics) {
      if (m != "W~") throw ConfigError("metric " + m + " needs subprobability inputs");
      const auto r = tilde_w(sigma, tau, a.p);
      out[m] = r.value;
      keep(r.plan);
    }
  } else {
    const auto mu = io::parse_measure(mj, s);
    const auto nu = io::parse_measure(nj, s);
    std::vector<std::string> metrics = a.metrics;
    if (metrics.empty()) {
      const bool equal = std::abs(mu.mass() - nu.mass()) <= kMassTolerance;
      bool interior = true;
      for (std::size_t z : s->boundary()) interior &= mu[z] == 0.0 && nu[z] == 0.0;
      if (equal) metrics.push_back("W");
      if (equal && std::abs(mu.mass() - 1.0) <= kMassTolerance) metrics.push_back("W~");
      if (interior) {
        metrics.push_back("W0");
        metrics.push_back("Wflat_upper");
        metrics.push_back("Wsharp_bounds");
      }
      metrics.push_back("Wprime");
      if (equal) {
        metrics.push_back("Wdagger");
        metrics.push_back("Wstar");
      }
      metrics.push_back("Whattop");
    }
    for (const auto& m : metrics) {
      if (m == "W") {
        const auto r = wasserstein(mu, nu, a.p);
        out[m] = r.value;
        keep(r.plan);
      } else if (m == "W~") {
        const auto r = tilde_w(lift(mu), lift(nu), a.p);
        out[m] = r.value;
        keep(r.plan);
      } else if (m == "W0") {
        const auto r = w0(mu, nu, a.p);
        out[m] = r.value;
        keep(r.witness.plan);
      } else if (m == "Wflat_upper") {
        out[m] = w_flat_upper(mu, nu, a.p, FlatStrategy::kBoundaryAnnihilation,
                              a.steps)
                     .value;
      } else if (m == "Wsharp_bounds") {
        const auto b = w_sharp_bounds(mu, nu, a.p);
        out[m] = {{"lower", b.lower}, {"upper", b.upper}};
      } else if (m == "Wprime") {
        const auto r = w_prime(mu, nu, a.p);
        out[m] = r.value;
        keep(r.plan);
      } else if (m == "Wdagger") {
        const auto r = w_dagger(mu, nu, a.p);
        out[m] = r.value;
        keep(r.plan);
      } else if (m == "Wstar") {
        const auto r = w_star(mu, nu, a.p);
        out[m] = r.value;
        keep(r.plan);
      } else if (m == "Whattop") {
        const auto r = w_doubleprime(mu, nu, a.p);
        out[m] = r.value;
        keep(r.plan);
      } else {
        throw ConfigError("unknown metric " + m);
      }
    }
  }
  if (!a.plan.empty()) {
    if (!plan) throw ConfigError("none of the requested metrics has a plan");
    std::ofstream f(a.plan);
    if (!f) throw ConfigError("cannot write " + a.plan);
    io::write_plan_csv(f, *plan);
  }
  emit(a, out.dump(2) + "\n");
  return kPass;
}

int cmd_flow(const Args& a) {
  const HeatSystem sys = io::parse_heat_system(io::load_json(need(a.space, "--space")));
  const json mj = io::load_json(need(a.mu, "--mu"));
  check_times(a.times);
  json states = json::array();
  if (io::is_charged(mj)) {
    const auto sigma = io::parse_charged(mj, sys.space_ptr());
    for (double t : a.times) {
      const auto st = charged_flow(sigma, t, sys);
      states.push_back({{"t", t},
                        {"plus", io::to_json(st.plus())},
                        {"minus", io::to_json(st.minus())}});
    }
    emit(a, json{{"flavor", "charged"}, {"states", states}}.dump(2) + "\n");
    return kPass;
  }
  Flavor flavor;
  if (a.flavor == "neumann") flavor = Flavor::kNeumann;
  else if (a.flavor == "dirichlet") flavor = Flavor::kDirichlet;
  else throw ConfigError("flavor must be neumann or dirichlet");
  const auto mu = io::parse_measure(mj, sys.space_ptr());
  for (double t : a.times) {
    json st = io::to_json(apply_measure_flow(sys, mu, t, flavor));
    st["t"] = t;
    states.push_back(std::move(st));
  }
  emit(a, json{{"flavor", a.flavor}, {"states", states}}.dump(2) + "\n");
  return kPass;
}

std::string csv(const std::vector<ExperimentRow>& rows) {
  std::ostringstream os;
  io::write_experiment_csv(os, rows);
  return os.str();
}

int verdict(const std::vector<ExperimentRow>& rows, double tolerance) {
  for (const auto& r : rows)
    if (r.violation > tolerance) return kAssertion;
  return kPass;
}

int cmd_contract(const Args& a) {
  const HeatSystem sys = io::parse_heat_system(io::load_json(need(a.space, "--space")));
  const json mj = io::load_json(need(a.mu, "--mu"));
  const json nj = io::load_json(need(a.nu, "--nu"));
  check_times(a.times);
  std::vector<ExperimentRow> rows;
  if (io::is_charged(mj) || io::is_charged(nj)) {
    rows = charged_contraction_experiment(charged_or_lift(mj, sys.space_ptr()),
                                          charged_or_lift(nj, sys.space_ptr()),
                                          a.p, a.times, sys, a.K);
  } else {
    rows = contraction_experiment(io::parse_measure(mj, sys.space_ptr()),
                                  io::parse_measure(nj, sys.space_ptr()), a.p,
                                  a.times, sys, a.K);
  }
  emit(a, csv(rows));
  return verdict(rows, a.tolerance.value_or(1e-6));
}

int cmd_bochner(const Args& a) {
  const json spec = a.space.empty()
                        ? json{{"type", "interval"},
                               {"a", 0.0},
                               {"b", std::numbers::pi},
                               {"n_points", 401}}
                        : io::load_json(a.space);
  const HeatSystem sys = io::parse_heat_system(spec);
  const auto coords = sys.space().coords();
  if (coords.empty()) throw ConfigError("bochner needs an interval space");
  const double lo = coords.front(), len = coords.back() - coords.front();
  const auto n = static_cast<Eigen::Index>(sys.size());
  std::vector<double> times = a.times.empty() ? std::vector<double>{0.01, 0.1, 1.0}
                                              : a.times;
  check_times(times);

  Eigen::VectorXd phi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = std::sin(std::numbers::pi * (coords[i] - lo) / len);
    if (a.phi == "one") phi[i] = 1.0;
    else if (a.phi == "bump") phi[i] = s * s;
    else throw ConfigError("phi must be one or bump");
  }
  std::vector<ExperimentRow> rows;
  for (int k : a.modes) {
    if (k < 1) throw ConfigError("modes are numbered from 1");
    Eigen::VectorXd f(n);
    for (Eigen::Index i = 0; i < n; ++i)
      f[i] = std::sin(k * std::numbers::pi * (coords[i] - lo) / len);
    for (std::size_t z : sys.space().boundary()) f[static_cast<Eigen::Index>(z)] = 0.0;
    const std::string tag = "/mode-" + std::to_string(k);
    for (double t : times) {
      const auto g = gradient_estimate_check(f, t, a.p, a.K, sys);
      rows.push_back({t, (g.lhs - g.rhs).maxCoeff(), 0.0, g.max_violation,
                      "gradient-estimate" + tag});
    }
    const auto b = bochner_check(f, phi, a.p, a.K, sys);
    rows.push_back({0.0, b.rhs, b.lhs, std::max(0.0, -b.residual), "bochner" + tag});
  }
  emit(a, csv(rows));
  return verdict(rows, a.tolerance.value_or(5.0 * sys.mesh()));
}

int cmd_evi(const Args& a) {
  const HeatSystem sys = io::parse_heat_system(io::load_json(need(a.space, "--space")));
  const auto sigma = charged_or_lift(io::load_json(need(a.mu, "--mu")), sys.space_ptr());
  const auto tau = charged_or_lift(io::load_json(need(a.nu, "--nu")), sys.space_ptr());
  check_times(a.times);
  const auto rows = evi_residual(sigma, tau, a.times, a.K, sys, a.dt);
  emit(a, csv(rows));
  // Report-style unless a tolerance is requested.
  return a.tolerance ? verdict(rows, *a.tolerance) : kPass;
}

int cmd_validate(const Args& a) {
  const json spec = io::load_json(need(a.space, "--space"));
  std::ostringstream os;
  bool ok = true;
  SpacePtr s;
  try {
    s = io::parse_space(spec);
    os << "space: ok (" << s->size() << " points, " << s->boundary().size()
       << " boundary)\n";
  } catch (const ConfigError& e) {
    os << "space: " << e.what() << "\n";
    emit(a, os.str());
    return kAssertion;
  }
  if (s->boundary().empty()) {
    os << "space: boundary set is empty; boundary-based distances are undefined\n";
    ok = false;
  }
  for (const auto& [flag, arg] : {std::pair{"mu", a.mu}, std::pair{"nu", a.nu}}) {
    if (arg.empty()) continue;
    const json mj = io::load_json(arg);
    try {
      if (io::is_charged(mj)) {
        io::parse_charged(mj, s);
        os << flag << ": valid charged measure\n";
      } else {
        const auto mu = io::parse_measure(mj, s);
        require_subprobability(mu, false);
        bool interior = true;
        for (std::size_t z : s->boundary()) interior &= mu[z] == 0.0;
        os << flag << ": valid subprobability, mass " << io::format_number(mu.mass())
           << (interior ? ", supported on the interior\n" : ", charges the boundary\n");
      }
    } catch (const Error& e) {
      os << flag << ": " << e.what() << "\n";
      ok = false;
    }
  }
  emit(a, os.str());
  return ok ? kPass : kAssertion;
}

int cmd_paper_examples(const Args& a) {
  if (a.list) {
    std::string text;
    for (const auto& anchor : cli::example_anchors()) text += anchor + "\n";
    emit(a, text);
    return kPass;
  }
  cli::ExampleOptions opt;
  opt.tolerance = a.tolerance;
  opt.only = a.only;
  opt.seed = a.seed;
  const auto rows = cli::run_paper_examples(opt);
  if (rows.empty()) throw ConfigError("no example matches " + a.only);
  std::string text;
  char buf[512];
  std::snprintf(buf, sizeof buf, "%-24s %-3s %-22s %-22s %-9s %s\n", "anchor", "rel",
                "expected", "computed", "tol", "status");
  text += buf;
  bool all = true;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-24s %-3s %-22.15g %-22.15g %-9.2g %s\n",
                  r.anchor.c_str(), r.relation.c_str(), r.expected, r.computed,
                  r.tolerance, r.pass ? "PASS" : "FAIL");
    text += buf;
    all &= r.pass;
  }
  emit(a, text);
  return all ? kPass : kAssertion;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transportation-annihilation distances and heat-flow experiments"};
  app.require_subcommand(1);
  Args a;

  auto common = [&](CLI::App* c, bool two_measures) {
    c->add_option("--space", a.space, "space spec (JSON text or file)");
    c->add_option("--mu", a.mu, "measure spec (JSON text or file)");
    if (two_measures) c->add_option("--nu", a.nu, "second measure spec");
    c->add_option("--out", a.out, "write output here instead of stdout");
  };

  auto* dist = app.add_subcommand("dist", "evaluate distances between two measures");
  common(dist, true);
  dist->add_option("--p", a.p, "exponent p >= 1")->capture_default_str();
  dist->add_option("--metric", a.metrics,
                   "subset of W,W~,W0,Wflat_upper,Wsharp_bounds,Wprime,Wdagger,"
                   "Wstar,Whattop")
      ->delimiter(',');
  dist->add_option("--steps", a.steps, "chain length for Wflat_upper")
      ->capture_default_str();
  dist->add_option("--plan", a.plan, "write the first available plan as CSV");

  auto* flow = app.add_subcommand("flow", "heat flow of a measure or charged measure");
  common(flow, false);
  flow->add_option("--t", a.times, "times")->delimiter(',');
  flow->add_option("--flavor", a.flavor, "neumann or dirichlet")->capture_default_str();

  auto* contract = app.add_subcommand("contract", "contraction table under heat flow");
  common(contract, true);
  contract->add_option("--p", a.p)->capture_default_str();
  contract->add_option("--K", a.K, "curvature bound")->capture_default_str();
  contract->add_option("--t", a.times, "times")->delimiter(',');
  contract->add_option("--tolerance", a.tolerance, "allowed violation (1e-6)");

  auto* bochner = app.add_subcommand("bochner", "gradient estimate and Bochner reports");
  common(bochner, false);
  bochner->add_option("--p", a.p)->capture_default_str();
  bochner->add_option("--K", a.K)->capture_default_str();
  bochner->add_option("--t", a.times, "times (0.01,0.1,1)")->delimiter(',');
  bochner->add_option("--mode", a.modes, "Dirichlet eigenmodes")->delimiter(',');
  bochner->add_option("--phi", a.phi, "test function: one or bump")->capture_default_str();
  bochner->add_option("--tolerance", a.tolerance, "allowed violation (5 * mesh)");

  auto* evi = app.add_subcommand("evi", "EVI residuals along the charged heat flow");
  common(evi, true);
  evi->add_option("--K", a.K)->capture_default_str();
  evi->add_option("--t", a.times, "times")->delimiter(',');
  evi->add_option("--dt", a.dt, "finite-difference step")->capture_default_str();
  evi->add_option("--tolerance", a.tolerance, "fail above this residual");

  auto* examples = app.add_subcommand("paper-examples", "run the worked-example catalogue");
  examples->add_option("--only", a.only, "anchor prefix");
  examples->add_option("--tolerance", a.tolerance, "override every tolerance");
  examples->add_option("--seed", a.seed)->capture_default_str();
  examples->add_flag("--list", a.list, "list anchors and exit");
  examples->add_option("--out", a.out);

  auto* validate = app.add_subcommand("validate", "check a space and optional measures");
  common(validate, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kConfig;
  }

  try {
    if (a.p < 1.0 || !std::isfinite(a.p)) throw ConfigError("--p must be >= 1");
    if (*dist) return cmd_dist(a);
    if (*flow) return cmd_flow(a);
    if (*contract) return cmd_contract(a);
    if (*bochner) return cmd_bochner(a);
    if (*evi) return cmd_evi(a);
    if (*examples) return cmd_paper_examples(a);
    if (*validate) return cmd_validate(a);
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kAssertion;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  }
  return kConfig;
}
