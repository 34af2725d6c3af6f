#include "tadist/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

#include "tadist/error.hpp"

namespace tadist::io {

namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("field \"") + key + "\": " + e.what());
  }
}

template <class T>
T field_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? field<T>(j, key) : fallback;
}

std::string type_of(const json& spec) {
  if (!spec.is_object()) throw ConfigError("space spec must be a JSON object");
  return field_or<std::string>(spec, "type", "explicit");
}

}  // namespace

json load_json(const std::string& arg) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  try {
    if (first != std::string::npos && (arg[first] == '{' || arg[first] == '['))
      return json::parse(arg);
    std::ifstream in(arg);
    if (!in) throw ConfigError("cannot open " + arg);
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("invalid JSON in " + arg.substr(0, 60) + ": " + e.what());
  }
}

SpacePtr parse_space(const json& spec) {
  const std::string type = type_of(spec);
  if (type == "interval")
    return interval_space(field<double>(spec, "a"), field<double>(spec, "b"),
                          field<std::size_t>(spec, "n_points"));
  if (type == "cycle")
    return cycle_space(field<double>(spec, "circumference"),
                       field<std::size_t>(spec, "n_points"),
                       field_or<std::vector<std::size_t>>(spec, "boundary", {}));
  if (type == "line")
    return line_space(field<std::vector<double>>(spec, "coords"),
                      field<std::vector<std::size_t>>(spec, "boundary"),
                      field_or<std::vector<double>>(spec, "weights", {}));
  if (type != "explicit") throw ConfigError("unknown space type \"" + type + "\"");

  const auto rows = field<std::vector<std::vector<double>>>(spec, "dist");
  const std::size_t n = field_or<std::size_t>(spec, "n", rows.size());
  if (rows.size() != n) throw ConfigError("dist must have n rows");
  Eigen::MatrixXd d(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) throw ConfigError("dist must be square");
    for (std::size_t j = 0; j < n; ++j) d(i, j) = rows[i][j];
  }
  auto weights = field_or<std::vector<double>>(spec, "weights", {});
  if (weights.empty()) weights.assign(n, 1.0);
  auto space = std::make_shared<const MetricSpace>(
      std::move(d), field<std::vector<std::size_t>>(spec, "boundary"),
      std::move(weights), field_or<std::vector<std::string>>(spec, "labels", {}));
  const auto report = validate_metric(*space);
  for (const Violation& v : report.violations) {
    // An empty Z is representable; every other axiom must hold.
    if (v.kind == ViolationKind::kBoundaryEmpty) continue;
    throw ConfigError("space is not a valid metric space: " + to_string(v.kind));
  }
  return space;
}

HeatSystem parse_heat_system(const json& spec) {
  if (type_of(spec) == "interval")
    return build_interval_system(field<double>(spec, "a"),
                                 field<double>(spec, "b"),
                                 field<std::size_t>(spec, "n_points"));
  return build_graph_system(parse_space(spec));
}

DiscreteMeasure parse_measure(const json& spec, const SpacePtr& space) {
  if (!spec.is_object()) throw ConfigError("measure spec must be a JSON object");
  if (spec.contains("weights"))
    return DiscreteMeasure(space, field<std::vector<double>>(spec, "weights"));
  if (!spec.contains("atoms"))
    throw ConfigError("measure spec needs \"weights\" or \"atoms\"");
  std::vector<double> w(space->size(), 0.0);
  for (const json& atom : spec.at("atoms")) {
    std::size_t i = 0;
    if (atom.contains("index")) {
      i = field<std::size_t>(atom, "index");
      if (i >= w.size()) throw ConfigError("atom index out of range");
    } else {
      const auto at = find_coordinate(*space, field<double>(atom, "x"));
      if (!at) throw ConfigError("atom coordinate is not a grid point");
      i = *at;
    }
    w[i] += field<double>(atom, "mass");
  }
  return DiscreteMeasure(space, std::move(w));
}

bool is_charged(const json& spec) {
  return spec.is_object() && spec.contains("plus");
}

ChargedMeasure parse_charged(const json& spec, const SpacePtr& space) {
  if (!is_charged(spec) || !spec.contains("minus"))
    throw ConfigError("charged measure needs \"plus\" and \"minus\"");
  return ChargedMeasure(parse_measure(spec.at("plus"), space),
                        parse_measure(spec.at("minus"), space));
}

json to_json(const MetricSpace& space) {
  const std::size_t n = space.size();
  json dist = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < n; ++j) row.push_back(space.dist(i, j));
    dist.push_back(std::move(row));
  }
  json out = {{"n", n},
              {"dist", std::move(dist)},
              {"boundary", std::vector<std::size_t>(space.boundary().begin(),
                                                    space.boundary().end())},
              {"weights", std::vector<double>(space.weights().begin(),
                                              space.weights().end())}};
  if (!space.labels().empty())
    out["labels"] = std::vector<std::string>(space.labels().begin(),
                                             space.labels().end());
  return out;
}

json to_json(const DiscreteMeasure& mu) {
  return {{"weights", std::vector<double>(mu.weights().begin(),
                                          mu.weights().end())},
          {"mass", mu.mass()}};
}

std::string format_number(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_plan_csv(std::ostream& out, const TransportPlan& plan) {
  out << "i,j,mass\n";
  for (const PlanEntry& e : plan.entries)
    out << e.from << ',' << e.to << ',' << format_number(e.mass) << '\n';
}

void write_experiment_csv(std::ostream& out,
                          const std::vector<ExperimentRow>& rows) {
  out << "t,quantity,bound,violation,anchor\n";
  for (const ExperimentRow& r : rows)
    out << format_number(r.t) << ',' << format_number(r.quantity) << ','
        << format_number(r.bound) << ',' << format_number(r.violation) << ','
        << r.anchor << '\n';
}

}  // namespace tadist::io
