#include "tadist/lp/network_simplex.hpp"

#include <algorithm>
#include <cmath>

#include "tadist/error.hpp"

namespace tadist::lp {

namespace {

constexpr signed char kStateUpper = -1;
constexpr signed char kStateTree = 0;
constexpr signed char kStateLower = 1;
constexpr signed char kDirUp = 1;
constexpr signed char kDirDown = -1;

}  // namespace

NetworkSimplex::NetworkSimplex(std::size_t nodes)
    : node_num_(nodes), supply_(nodes, 0.0) {}

void NetworkSimplex::set_supply(std::size_t node, double supply) {
  if (node >= node_num_) throw ConfigError("supply node out of range");
  supply_[node] = supply;
}

void NetworkSimplex::add_supply(std::size_t node, double supply) {
  if (node >= node_num_) throw ConfigError("supply node out of range");
  supply_[node] += supply;
}

std::size_t NetworkSimplex::add_arc(std::size_t from, std::size_t to,
                                    double cost, double capacity) {
  if (from >= node_num_ || to >= node_num_)
    throw ConfigError("arc endpoint out of range");
  if (!std::isfinite(cost)) throw ConfigError("arc cost must be finite");
  if (!(capacity >= 0.0)) throw ConfigError("arc capacity must be >= 0");
  src_.push_back(static_cast<int>(from));
  tgt_.push_back(static_cast<int>(to));
  cost_.push_back(cost);
  cap_.push_back(capacity);
  return src_.size() - 1;
}

double NetworkSimplex::total_cost() const {
  double c = 0.0;
  for (int e = 0; e < arc_num_; ++e) c += wcost_[e] * flow_[e];
  return c;
}

NetworkSimplex::Status NetworkSimplex::run() {
  const int n = static_cast<int>(node_num_);
  arc_num_ = static_cast<int>(src_.size());
  all_arc_num_ = arc_num_ + n;
  root_ = n;

  double sum_supply = 0.0, max_cost = 0.0;
  max_abs_supply_ = 0.0;
  for (double s : supply_) {
    sum_supply += s;
    max_abs_supply_ = std::max(max_abs_supply_, std::abs(s));
  }
  for (double c : cost_) max_cost = std::max(max_cost, std::abs(c));
  const double supply_tol = 1e-9 * std::max(1.0, max_abs_supply_);
  if (std::abs(sum_supply) > supply_tol)
    throw ConfigError("min-cost flow supplies do not balance");
  cost_eps_ = 1e-12 * std::max(1.0, max_cost);
  const double art_cost = (max_cost + 1.0) * static_cast<double>(n + 1);

  source_.assign(all_arc_num_, 0);
  target_.assign(all_arc_num_, 0);
  wcost_.assign(all_arc_num_, 0.0);
  wcap_.assign(all_arc_num_, kInfinity);
  flow_.assign(all_arc_num_, 0.0);
  state_.assign(all_arc_num_, kStateLower);
  pi_.assign(n + 1, 0.0);
  parent_.assign(n + 1, -1);
  pred_.assign(n + 1, -1);
  thread_.assign(n + 1, 0);
  rev_thread_.assign(n + 1, 0);
  succ_num_.assign(n + 1, 0);
  last_succ_.assign(n + 1, 0);
  pred_dir_.assign(n + 1, 0);

  for (int e = 0; e < arc_num_; ++e) {
    source_[e] = src_[e];
    target_[e] = tgt_[e];
    wcost_[e] = cost_[e];
    wcap_[e] = cap_[e];
  }

  parent_[root_] = -1;
  pred_[root_] = -1;
  thread_[root_] = 0;
  rev_thread_[0] = root_;
  succ_num_[root_] = n + 1;
  last_succ_[root_] = root_ - 1;
  pi_[root_] = 0.0;

  // The imbalance left by rounding is absorbed by the last node.
  std::vector<double> supply(supply_);
  if (n > 0) supply[n - 1] -= sum_supply;

  for (int u = 0, e = arc_num_; u != n; ++u, ++e) {
    parent_[u] = root_;
    pred_[u] = e;
    thread_[u] = u + 1;
    rev_thread_[u + 1] = u;
    succ_num_[u] = 1;
    last_succ_[u] = u;
    state_[e] = kStateTree;
    if (supply[u] >= 0) {
      pred_dir_[u] = kDirUp;
      pi_[u] = 0.0;
      source_[e] = u;
      target_[e] = root_;
      flow_[e] = supply[u];
      wcost_[e] = 0.0;
    } else {
      pred_dir_[u] = kDirDown;
      pi_[u] = art_cost;
      source_[e] = root_;
      target_[e] = u;
      flow_[e] = -supply[u];
      wcost_[e] = art_cost;
    }
  }
  if (n == 0) return Status::kOptimal;

  block_size_ = std::max(
      10, static_cast<int>(std::sqrt(static_cast<double>(arc_num_))));
  next_arc_ = 0;
  pivots_ = 0;

  while (find_entering()) {
    find_join();
    const bool change = find_leaving();
    if (delta_ >= kInfinity) return Status::kUnbounded;
    change_flow(change);
    if (change) {
      update_tree();
      update_potential();
    }
    ++pivots_;
  }

  for (int e = arc_num_; e != all_arc_num_; ++e)
    if (flow_[e] > supply_tol) return Status::kInfeasible;
  return Status::kOptimal;
}

bool NetworkSimplex::find_entering() {
  if (arc_num_ == 0) return false;
  double min = -cost_eps_;
  bool found = false;
  int cnt = block_size_;
  int e;
  for (e = next_arc_; e != arc_num_; ++e) {
    const double c =
        state_[e] * (wcost_[e] + pi_[source_[e]] - pi_[target_[e]]);
    if (c < min) {
      min = c;
      in_arc_ = e;
      found = true;
    }
    if (--cnt == 0) {
      if (found) goto search_end;
      cnt = block_size_;
    }
  }
  for (e = 0; e != next_arc_; ++e) {
    const double c =
        state_[e] * (wcost_[e] + pi_[source_[e]] - pi_[target_[e]]);
    if (c < min) {
      min = c;
      in_arc_ = e;
      found = true;
    }
    if (--cnt == 0) {
      if (found) goto search_end;
      cnt = block_size_;
    }
  }
  if (!found) return false;
search_end:
  next_arc_ = e == arc_num_ ? 0 : e;
  return true;
}

void NetworkSimplex::find_join() {
  int u = source_[in_arc_], v = target_[in_arc_];
  while (u != v) {
    if (succ_num_[u] < succ_num_[v])
      u = parent_[u];
    else
      v = parent_[v];
  }
  join_ = u;
}

bool NetworkSimplex::find_leaving() {
  int first, second;
  if (state_[in_arc_] == kStateLower) {
    first = source_[in_arc_];
    second = target_[in_arc_];
  } else {
    first = target_[in_arc_];
    second = source_[in_arc_];
  }
  delta_ = wcap_[in_arc_];
  int result = 0;
  for (int u = first; u != join_; u = parent_[u]) {
    const int e = pred_[u];
    double d = flow_[e];
    bool upper = false;
    if (pred_dir_[u] == kDirDown) {
      d = wcap_[e] >= kInfinity ? kInfinity : wcap_[e] - d;
      upper = true;
    }
    d = std::max(d, 0.0);
    if (d < delta_) {
      delta_ = d;
      u_out_ = u;
      result = 1;
      leave_at_upper_ = upper;
    }
  }
  for (int u = second; u != join_; u = parent_[u]) {
    const int e = pred_[u];
    double d = flow_[e];
    bool upper = false;
    if (pred_dir_[u] == kDirUp) {
      d = wcap_[e] >= kInfinity ? kInfinity : wcap_[e] - d;
      upper = true;
    }
    d = std::max(d, 0.0);
    if (d <= delta_) {
      delta_ = d;
      u_out_ = u;
      result = 2;
      leave_at_upper_ = upper;
    }
  }
  if (result == 1) {
    u_in_ = first;
    v_in_ = second;
  } else {
    u_in_ = second;
    v_in_ = first;
  }
  return result != 0;
}

void NetworkSimplex::change_flow(bool change) {
  if (delta_ > 0) {
    const double val = state_[in_arc_] * delta_;
    flow_[in_arc_] += val;
    for (int u = source_[in_arc_]; u != join_; u = parent_[u])
      flow_[pred_[u]] -= pred_dir_[u] * val;
    for (int u = target_[in_arc_]; u != join_; u = parent_[u])
      flow_[pred_[u]] += pred_dir_[u] * val;
  }
  if (change) {
    state_[in_arc_] = kStateTree;
    const int out = pred_[u_out_];
    flow_[out] = leave_at_upper_ ? wcap_[out] : 0.0;
    state_[out] = leave_at_upper_ ? kStateUpper : kStateLower;
  } else {
    flow_[in_arc_] = state_[in_arc_] == kStateLower ? wcap_[in_arc_] : 0.0;
    state_[in_arc_] = static_cast<signed char>(-state_[in_arc_]);
  }
}

void NetworkSimplex::update_tree() {
  const int old_rev_thread = rev_thread_[u_out_];
  const int old_succ_num = succ_num_[u_out_];
  const int old_last_succ = last_succ_[u_out_];
  v_out_ = parent_[u_out_];

  if (u_in_ == u_out_) {
    parent_[u_in_] = v_in_;
    pred_[u_in_] = in_arc_;
    pred_dir_[u_in_] = u_in_ == source_[in_arc_] ? kDirUp : kDirDown;
    if (thread_[v_in_] != u_out_) {
      int after = thread_[old_last_succ];
      thread_[old_rev_thread] = after;
      rev_thread_[after] = old_rev_thread;
      after = thread_[v_in_];
      thread_[v_in_] = u_out_;
      rev_thread_[u_out_] = v_in_;
      thread_[old_last_succ] = after;
      rev_thread_[after] = old_last_succ;
    }
  } else {
    // When old_rev_thread == v_in, join and v_out coincide.
    const int thread_continue = old_rev_thread == v_in_
                                    ? thread_[old_last_succ]
                                    : thread_[v_in_];

    // Re-hang the stem u_in ... u_out below v_in.
    int stem = u_in_;
    int par_stem = v_in_;
    int last = last_succ_[u_in_];
    int before, after = thread_[last];
    thread_[v_in_] = u_in_;
    dirty_revs_.clear();
    dirty_revs_.push_back(v_in_);
    while (stem != u_out_) {
      const int next_stem = parent_[stem];
      thread_[last] = next_stem;
      dirty_revs_.push_back(last);

      before = rev_thread_[stem];
      thread_[before] = after;
      rev_thread_[after] = before;

      parent_[stem] = par_stem;
      par_stem = stem;
      stem = next_stem;

      last = last_succ_[stem] == last_succ_[par_stem] ? rev_thread_[par_stem]
                                                      : last_succ_[stem];
      after = thread_[last];
    }
    parent_[u_out_] = par_stem;
    thread_[last] = thread_continue;
    rev_thread_[thread_continue] = last;
    last_succ_[u_out_] = last;

    if (old_rev_thread != v_in_) {
      thread_[old_rev_thread] = after;
      rev_thread_[after] = old_rev_thread;
    }

    for (int u : dirty_revs_) rev_thread_[thread_[u]] = u;

    int tmp_sc = 0;
    const int tmp_ls = last_succ_[u_out_];
    for (int u = u_out_, p = parent_[u]; u != u_in_; u = p, p = parent_[u]) {
      pred_[u] = pred_[p];
      pred_dir_[u] = static_cast<signed char>(-pred_dir_[p]);
      tmp_sc += succ_num_[u] - succ_num_[p];
      succ_num_[u] = tmp_sc;
      last_succ_[p] = tmp_ls;
    }
    pred_[u_in_] = in_arc_;
    pred_dir_[u_in_] = u_in_ == source_[in_arc_] ? kDirUp : kDirDown;
    succ_num_[u_in_] = old_succ_num;
  }

  const int up_limit_out = last_succ_[join_] == v_in_ ? join_ : -1;
  const int last_succ_out = last_succ_[u_out_];
  for (int u = v_in_; u != -1 && last_succ_[u] == v_in_; u = parent_[u])
    last_succ_[u] = last_succ_out;

  if (join_ != old_rev_thread && v_in_ != old_rev_thread) {
    for (int u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ;
         u = parent_[u])
      last_succ_[u] = old_rev_thread;
  } else if (last_succ_out != old_last_succ) {
    for (int u = v_out_; u != up_limit_out && last_succ_[u] == old_last_succ;
         u = parent_[u])
      last_succ_[u] = last_succ_out;
  }

  for (int u = v_in_; u != join_; u = parent_[u]) succ_num_[u] += old_succ_num;
  for (int u = v_out_; u != join_; u = parent_[u]) succ_num_[u] -= old_succ_num;
}

void NetworkSimplex::update_potential() {
  const double sigma =
      pi_[v_in_] - pi_[u_in_] - pred_dir_[u_in_] * wcost_[in_arc_];
  const int end = thread_[last_succ_[u_in_]];
  for (int u = u_in_; u != end; u = thread_[u]) pi_[u] += sigma;
}

}  // namespace tadist::lp
