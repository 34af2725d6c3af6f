#include <doctest.h>

#include <sstream>

#include "tadist/error.hpp"
#include "tadist/io.hpp"

using namespace tadist;
using tadist::io::json;

TEST_SUITE("io") {

TEST_CASE("space specs") {
  const auto s = io::parse_space(json::parse(R"({"type":"interval","a":-1,"b":1,"n_points":5})"));
  CHECK(s->size() == 5);
  const auto c = io::parse_space(json::parse(R"({"type":"cycle","circumference":2,"n_points":4})"));
  CHECK(c->boundary().empty());
  const auto l = io::parse_space(json::parse(R"({"type":"line","coords":[0,1,3],"boundary":[0]})"));
  CHECK(l->dist(1, 2) == doctest::Approx(2));
  const auto e = io::parse_space(json::parse(
      R"({"dist":[[0,1],[1,0]],"boundary":[0],"labels":["z","y"]})"));
  CHECK(e->labels()[1] == "y");
  CHECK_THROWS_AS(io::parse_space(json::parse(R"({"type":"blob"})")), ConfigError);
  CHECK_THROWS_AS(io::parse_space(json::parse(
                      R"({"dist":[[0,1,5],[1,0,1],[5,1,0]],"boundary":[0]})")),
                  ConfigError);
  CHECK_THROWS_AS(io::load_json("/nonexistent/space.json"), ConfigError);
  CHECK_THROWS_AS(io::load_json("{not json"), ConfigError);
}

TEST_CASE("measure specs") {
  const auto s = io::parse_space(io::load_json(R"({"type":"interval","a":0,"b":1,"n_points":11})"));
  const auto m = io::parse_measure(json::parse(R"({"atoms":[{"x":0.3,"mass":0.5},{"index":2,"mass":0.25}]})"), s);
  CHECK(m[3] == doctest::Approx(0.5));
  CHECK(m[2] == doctest::Approx(0.25));
  CHECK_THROWS_AS(io::parse_measure(json::parse(R"({"atoms":[{"x":0.33,"mass":1}]})"), s),
                  ConfigError);
  CHECK_THROWS_AS(io::parse_measure(json::parse(R"({"weights":[1,2]})"), s), ConfigError);
  const json charged = json::parse(
      R"({"plus":{"atoms":[{"x":0.2,"mass":0.5}]},"minus":{"atoms":[{"x":0.8,"mass":0.5}]}})");
  CHECK(io::is_charged(charged));
  CHECK(io::parse_charged(charged, s).minus()[8] == doctest::Approx(0.5));
  CHECK(io::to_json(m)["mass"].get<double>() == doctest::Approx(0.75));
}

TEST_CASE("csv and numbers") {
  TransportPlan plan;
  plan.entries = {{0, 1, 0.5}};
  std::ostringstream out;
  io::write_plan_csv(out, plan);
  CHECK(out.str() == "i,j,mass\n0,1,0.5\n");
  std::ostringstream rows;
  io::write_experiment_csv(rows, {{0.1, 1, 2, 0, "w0-contraction"}});
  CHECK(rows.str() == "t,quantity,bound,violation,anchor\n0.1,1,2,0,w0-contraction\n");
  CHECK(io::format_number(0.1) == "0.1");
  CHECK(io::format_number(1.0 / 3) == "0.3333333333333333");
}

}
