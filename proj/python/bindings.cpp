#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tadist/annihilation.hpp"
#include "tadist/charged.hpp"
#include "tadist/error.hpp"
#include "tadist/heat.hpp"
#include "tadist/transport.hpp"

namespace py = pybind11;
using namespace tadist;

namespace {

// Python holds spaces through a non-const pointer; the library never mutates
// them.
using Space = std::shared_ptr<MetricSpace>;

Space wrap(SpacePtr s) { return std::const_pointer_cast<MetricSpace>(std::move(s)); }

DiscreteMeasure measure(const Space& s, std::vector<double> w) {
  return DiscreteMeasure(s, std::move(w));
}

ChargedMeasure charged(const Space& s, std::vector<double> plus,
                       std::vector<double> minus) {
  return ChargedMeasure(measure(s, std::move(plus)), measure(s, std::move(minus)));
}

std::vector<double> weights(const DiscreteMeasure& m) {
  return {m.weights().begin(), m.weights().end()};
}

py::list plan_entries(const TransportPlan& plan) {
  py::list out;
  for (const auto& e : plan.entries) out.append(py::make_tuple(e.from, e.to, e.mass));
  return out;
}

Flavor flavor(const std::string& name) {
  if (name == "neumann") return Flavor::kNeumann;
  if (name == "dirichlet") return Flavor::kDirichlet;
  throw ConfigError("flavor must be 'neumann' or 'dirichlet'");
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact transportation-annihilation distances on finite spaces";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<MassError>(m, "MassError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<SolverError>(m, "SolverError", base.ptr());

  py::class_<MetricSpace, Space>(m, "MetricSpace")
      .def(py::init([](Eigen::MatrixXd dist, std::vector<std::size_t> boundary,
                       std::vector<double> weights) {
             return std::make_shared<MetricSpace>(std::move(dist), std::move(boundary),
                                                  std::move(weights));
           }),
           py::arg("dist"), py::arg("boundary"), py::arg("weights"))
      .def_property_readonly("size", &MetricSpace::size)
      .def_property_readonly("distances", &MetricSpace::distances)
      .def_property_readonly("boundary",
                             [](const MetricSpace& s) {
                               return std::vector<std::size_t>(s.boundary().begin(),
                                                               s.boundary().end());
                             })
      .def_property_readonly("weights",
                             [](const MetricSpace& s) {
                               return std::vector<double>(s.weights().begin(),
                                                          s.weights().end());
                             })
      .def_property_readonly("coords",
                             [](const MetricSpace& s) {
                               return std::vector<double>(s.coords().begin(),
                                                          s.coords().end());
                             })
      .def("__len__", &MetricSpace::size);

  m.def("interval_space", [](double a, double b, std::size_t n) {
    return wrap(interval_space(a, b, n));
  }, py::arg("a"), py::arg("b"), py::arg("n_points"));
  m.def("line_space", [](std::vector<double> c, std::vector<std::size_t> z,
                         std::vector<double> w) {
    return wrap(line_space(std::move(c), std::move(z), std::move(w)));
  }, py::arg("coords"), py::arg("boundary"), py::arg("weights") = std::vector<double>{});
  m.def("cycle_space", [](double circumference, std::size_t n,
                          std::vector<std::size_t> z) {
    return wrap(cycle_space(circumference, n, std::move(z)));
  }, py::arg("circumference"), py::arg("n_points"),
        py::arg("boundary") = std::vector<std::size_t>{});
  m.def("find_coordinate", [](const Space& s, double x) { return find_coordinate(*s, x); });
  m.def("validate_metric", [](const Space& s) {
    py::list out;
    for (const auto& v : validate_metric(*s).violations)
      out.append(py::make_tuple(to_string(v.kind), v.i, v.j, v.k, v.excess));
    return out;
  }, "List of (kind, i, j, k, excess); empty for a valid space.");
  m.def("star_matrix", [](const Space& s) { return star_matrix(*s); });
  m.def("shortcut_matrix", [](const Space& s) { return shortcut_matrix(*s); });
  m.def("boundary_distances", [](const Space& s) { return boundary_distances(*s); });

  // Distances. Measures are weight vectors over the points of the space.
  m.def("wasserstein", [](const Space& s, std::vector<double> mu, std::vector<double> nu,
                          double p) {
    return wasserstein(measure(s, mu), measure(s, nu), p).value;
  }, py::arg("space"), py::arg("mu"), py::arg("nu"), py::arg("p"));
  m.def("w_star", [](const Space& s, std::vector<double> mu, std::vector<double> nu,
                     double p) { return w_star(measure(s, mu), measure(s, nu), p).value; },
        py::arg("space"), py::arg("mu"), py::arg("nu"), py::arg("p"));
  m.def("annihilation_cost", [](const Space& s, std::vector<double> mu, double p) {
    return annihilation_cost(measure(s, mu), p);
  }, py::arg("space"), py::arg("mu"), py::arg("p"));
  m.def("w_dagger", [](const Space& s, std::vector<double> mu, std::vector<double> nu,
                       double p) { return w_dagger(measure(s, mu), measure(s, nu), p).value; },
        py::arg("space"), py::arg("mu"), py::arg("nu"), py::arg("p"));
  m.def("w_prime", [](const Space& s, std::vector<double> mu, std::vector<double> nu,
                      double p) { return w_prime(measure(s, mu), measure(s, nu), p).value; },
        py::arg("space"), py::arg("mu"), py::arg("nu"), py::arg("p"));
  m.def("w_prime_zero", [](const Space& s, std::vector<double> mu, double p) {
    return w_prime_zero(measure(s, mu), p);
  }, py::arg("space"), py::arg("mu"), py::arg("p"));
  m.def("w_doubleprime", [](const Space& s, std::vector<double> mu,
                            std::vector<double> nu, double p) {
    return w_doubleprime(measure(s, mu), measure(s, nu), p).value;
  }, py::arg("space"), py::arg("mu"), py::arg("nu"), py::arg("p"));
  m.def("w0", [](const Space& s, std::vector<double> mu, std::vector<double> nu,
                 double p, bool with_witness) {
    W0Options opt;
    opt.with_plan = with_witness;
    const auto r = w0(measure(s, mu), measure(s, nu), p, opt);
    if (!with_witness) return py::object(py::float_(r.value));
    py::dict d;
    d["value"] = r.value;
    d["rho"] = weights(r.witness.rho);
    d["eta"] = weights(r.witness.eta);
    d["plan"] = plan_entries(r.witness.plan);
    return py::object(d);
  }, py::arg("space"), py::arg("mu"), py::arg("nu"), py::arg("p"),
        py::arg("with_witness") = false);
  m.def("w0_rep_p1", [](const Space& s, std::vector<double> mu, std::vector<double> nu) {
    return w0_rep_p1(measure(s, mu), measure(s, nu));
  }, py::arg("space"), py::arg("mu"), py::arg("nu"));
  m.def("w_flat_upper", [](const Space& s, std::vector<double> mu,
                           std::vector<double> nu, double p, int steps) {
    return w_flat_upper(measure(s, mu), measure(s, nu), p,
                        FlatStrategy::kBoundaryAnnihilation, steps).value;
  }, py::arg("space"), py::arg("mu"), py::arg("nu"), py::arg("p"), py::arg("steps") = 64);
  m.def("w_sharp_bounds", [](const Space& s, std::vector<double> mu,
                             std::vector<double> nu, double p) {
    const auto b = w_sharp_bounds(measure(s, mu), measure(s, nu), p);
    return py::make_tuple(b.lower, b.upper);
  }, py::arg("space"), py::arg("mu"), py::arg("nu"), py::arg("p"));
  m.def("tilde_w", [](const Space& s, std::vector<double> sp, std::vector<double> sm,
                      std::vector<double> tp, std::vector<double> tm, double p) {
    return tilde_w(charged(s, sp, sm), charged(s, tp, tm), p).value;
  }, py::arg("space"), py::arg("sigma_plus"), py::arg("sigma_minus"),
        py::arg("tau_plus"), py::arg("tau_minus"), py::arg("p"));
  m.def("charged_entropy", [](const Space& s, std::vector<double> plus,
                              std::vector<double> minus) {
    return charged_entropy(charged(s, plus, minus));
  });

  // Heat flows.
  py::class_<HeatSystem>(m, "HeatSystem")
      .def_property_readonly("space", [](const HeatSystem& h) { return wrap(h.space_ptr()); })
      .def_property_readonly("mesh", &HeatSystem::mesh)
      .def_property_readonly("generator", &HeatSystem::generator)
      .def("apply", [](const HeatSystem& h, const Eigen::VectorXd& f, double t,
                       const std::string& fl) { return apply_heat(h, f, t, flavor(fl)); },
           py::arg("f"), py::arg("t"), py::arg("flavor") = "neumann")
      .def("kernel", [](const HeatSystem& h, double t, const std::string& fl) {
        return h.kernel(t, flavor(fl));
      }, py::arg("t"), py::arg("flavor") = "neumann");
  m.def("interval_system", &build_interval_system, py::arg("a"), py::arg("b"),
        py::arg("n_points"));
  m.def("graph_system", [](const Space& s) { return build_graph_system(s); });
  m.def("measure_flow", [](const HeatSystem& h, std::vector<double> mu, double t,
                           const std::string& fl) {
    return weights(apply_measure_flow(h, DiscreteMeasure(h.space_ptr(), mu), t,
                                      flavor(fl)));
  }, py::arg("system"), py::arg("mu"), py::arg("t"), py::arg("flavor") = "neumann");
  m.def("charged_flow", [](const HeatSystem& h, std::vector<double> plus,
                           std::vector<double> minus, double t) {
    const auto sp = std::const_pointer_cast<MetricSpace>(h.space_ptr());
    const auto r = charged_flow(charged(sp, plus, minus), t, h);
    return py::make_tuple(weights(r.plus()), weights(r.minus()));
  }, py::arg("system"), py::arg("plus"), py::arg("minus"), py::arg("t"));
  m.def("contraction_experiment", [](const HeatSystem& h, std::vector<double> mu,
                                     std::vector<double> nu, double p,
                                     std::vector<double> times, double K) {
    const auto rows = contraction_experiment(DiscreteMeasure(h.space_ptr(), mu),
                                             DiscreteMeasure(h.space_ptr(), nu), p,
                                             times, h, K);
    py::list out;
    for (const auto& r : rows)
      out.append(py::make_tuple(r.t, r.quantity, r.bound, r.violation));
    return out;
  }, py::arg("system"), py::arg("mu"), py::arg("nu"), py::arg("p"), py::arg("times"),
        py::arg("K") = 0.0);
}
