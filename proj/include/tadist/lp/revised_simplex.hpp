#pragma once

#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

namespace tadist::lp {

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

const char* to_string(LpStatus status);

/// min c^T x subject to row constraints and x >= 0, stored column-wise.
class LinearProgram {
 public:
  using Entry = std::pair<int, double>;

  int add_row(Sense sense, double rhs);
  int add_column(double cost, std::initializer_list<Entry> entries);
  int add_column(double cost, const std::vector<Entry>& entries);

  int rows() const { return static_cast<int>(rhs_.size()); }
  int columns() const { return static_cast<int>(cost_.size()); }
  double rhs(int r) const { return rhs_[r]; }
  Sense sense(int r) const { return sense_[r]; }
  double cost(int c) const { return cost_[c]; }
  int column_begin(int c) const { return start_[c]; }
  int column_end(int c) const { return start_[c + 1]; }
  int entry_row(int k) const { return row_[k]; }
  double entry_value(int k) const { return value_[k]; }

 private:
  template <class It>
  int push_column(double cost, It first, It last);

  std::vector<double> rhs_;
  std::vector<Sense> sense_;
  std::vector<double> cost_;
  std::vector<int> start_{0};
  std::vector<int> row_;
  std::vector<double> value_;
};

struct SimplexOptions {
  /// Relative to max(1, max |c|).
  double optimality_tolerance = 1e-11;
  double feasibility_tolerance = 1e-9;
  double pivot_tolerance = 1e-9;
  long max_iterations = 2'000'000;
  /// Consecutive degenerate pivots before switching to Bland's rule.
  int bland_after = 60;
  /// Columns priced per block; 0 picks sqrt-scaled blocks.
  int pricing_block = 0;
};

struct LpSolution {
  LpStatus status = LpStatus::kIterationLimit;
  double objective = 0.0;
  std::vector<double> x;
  /// Multipliers y with c - A^T y >= 0 on the original rows.
  std::vector<double> row_duals;
  long iterations = 0;
};

/// Two-phase bounded-artificial revised simplex with a dense basis inverse.
///
/// Intended for LPs with up to about a thousand rows and many sparse columns.
LpSolution solve(const LinearProgram& lp, const SimplexOptions& options = {});

}  // namespace tadist::lp
