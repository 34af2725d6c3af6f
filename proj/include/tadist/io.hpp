#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "tadist/charged.hpp"
#include "tadist/heat.hpp"
#include "tadist/measure.hpp"
#include "tadist/metric_space.hpp"
#include "tadist/transport.hpp"

namespace tadist::io {

using nlohmann::json;

/// Parses `arg` as inline JSON when it starts with '{' or '[', otherwise
/// reads it as a file path. Throws ConfigError on any failure.
json load_json(const std::string& arg);

/// Space specs:
///   {"type": "interval", "a": -1, "b": 1, "n_points": 201}
///   {"type": "cycle", "circumference": 1, "n_points": 64, "boundary": [0]}
///   {"type": "line", "coords": [...], "boundary": [...], "weights": [...]}
///   {"n": 3, "dist": [[...]], "boundary": [...], "weights": [...],
///    "labels": [...]}                       (explicit; "type" optional)
SpacePtr parse_space(const json& spec);

/// Heat system for a space spec: the interval builder for intervals, the
/// irreducible-edge graph otherwise.
HeatSystem parse_heat_system(const json& spec);

/// Measure specs: {"weights": [...]} (one entry per point) or
/// {"atoms": [{"index": i, "mass": m} | {"x": coord, "mass": m}, ...]}.
DiscreteMeasure parse_measure(const json& spec, const SpacePtr& space);

bool is_charged(const json& spec);
/// {"plus": <measure>, "minus": <measure>}.
ChargedMeasure parse_charged(const json& spec, const SpacePtr& space);

json to_json(const MetricSpace& space);
json to_json(const DiscreteMeasure& mu);

/// CSV with header i,j,mass.
void write_plan_csv(std::ostream& out, const TransportPlan& plan);
/// CSV with header t,quantity,bound,violation,anchor.
void write_experiment_csv(std::ostream& out,
                          const std::vector<ExperimentRow>& rows);

/// Shortest decimal form that round-trips.
std::string format_number(double v);

}  // namespace tadist::io
