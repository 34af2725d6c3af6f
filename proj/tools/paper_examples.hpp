#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tadist::cli {

struct ExampleRow {
  std::string anchor;
  std::string claim;
  std::string relation;  // "=" or "<="
  double expected = 0.0;
  double computed = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ExampleOptions {
  std::optional<double> tolerance;  // overrides every row's tolerance
  std::string only;                 // anchor prefix filter; empty = all
  std::uint64_t seed = 1;
};

/// Runs the built-in catalogue of worked examples.
std::vector<ExampleRow> run_paper_examples(const ExampleOptions& options);

/// Every anchor in the catalogue, in run order.
std::vector<std::string> example_anchors();

}  // namespace tadist::cli
