#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace tadist::lp {

/// Primal network simplex for min-cost flow with real data.
///
/// Block-search pivoting on a strongly feasible spanning tree rooted at an
/// artificial node (the classical LEMON layout, specialised to doubles and to
/// equality supplies). Supplies must sum to zero within tolerance.
class NetworkSimplex {
 public:
  static constexpr double kInfinity = std::numeric_limits<double>::infinity();

  enum class Status { kOptimal, kInfeasible, kUnbounded };

  explicit NetworkSimplex(std::size_t nodes);

  /// Positive supply = source, negative = sink.
  void set_supply(std::size_t node, double supply);
  void add_supply(std::size_t node, double supply);
  std::size_t add_arc(std::size_t from, std::size_t to, double cost,
                      double capacity = kInfinity);

  std::size_t node_count() const { return node_num_; }
  std::size_t arc_count() const { return src_.size(); }

  Status run();

  double flow(std::size_t arc) const { return flow_[arc]; }
  /// Node potentials pi with cost(a) >= pi[to] - pi[from] at optimality.
  double potential(std::size_t node) const { return pi_[node]; }
  double total_cost() const;
  std::size_t pivots() const { return pivots_; }

 private:
  bool find_entering();
  void find_join();
  bool find_leaving();
  void change_flow(bool change);
  void update_tree();
  void update_potential();

  std::size_t node_num_;
  std::vector<int> src_, tgt_;
  std::vector<double> cost_, cap_;
  std::vector<double> supply_;

  // Working arrays; arcs beyond arc_num_ are artificial root arcs.
  int arc_num_ = 0;
  int all_arc_num_ = 0;
  int root_ = 0;
  std::vector<int> source_, target_;
  std::vector<double> wcost_, wcap_, flow_, pi_;
  std::vector<signed char> state_;
  std::vector<int> parent_, pred_, thread_, rev_thread_, succ_num_,
      last_succ_, dirty_revs_;
  std::vector<signed char> pred_dir_;

  int block_size_ = 0;
  int next_arc_ = 0;
  int in_arc_ = 0, join_ = 0, u_in_ = 0, v_in_ = 0, u_out_ = 0, v_out_ = 0;
  bool leave_at_upper_ = false;
  double delta_ = 0.0;
  double cost_eps_ = 0.0;
  std::size_t pivots_ = 0;
  double max_abs_supply_ = 0.0;
};

}  // namespace tadist::lp
