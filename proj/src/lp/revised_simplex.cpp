#include "tadist/lp/revised_simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "tadist/error.hpp"

namespace tadist::lp {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration-limit";
  }
  return "unknown";
}

int LinearProgram::add_row(Sense sense, double rhs) {
  if (!std::isfinite(rhs)) throw ConfigError("LP right-hand side must be finite");
  rhs_.push_back(rhs);
  sense_.push_back(sense);
  return rows() - 1;
}

template <class It>
int LinearProgram::push_column(double cost, It first, It last) {
  if (!std::isfinite(cost)) throw ConfigError("LP cost must be finite");
  for (It it = first; it != last; ++it) {
    if (it->first < 0 || it->first >= rows())
      throw ConfigError("LP column refers to a missing row");
    if (it->second == 0.0) continue;
    row_.push_back(it->first);
    value_.push_back(it->second);
  }
  cost_.push_back(cost);
  start_.push_back(static_cast<int>(row_.size()));
  return columns() - 1;
}

int LinearProgram::add_column(double cost, std::initializer_list<Entry> entries) {
  return push_column(cost, entries.begin(), entries.end());
}

int LinearProgram::add_column(double cost, const std::vector<Entry>& entries) {
  return push_column(cost, entries.begin(), entries.end());
}

namespace {

using RowMajor =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Kind : unsigned char { kStructural, kSlack, kArtificial };

class Simplex {
 public:
  Simplex(const LinearProgram& lp, const SimplexOptions& opt)
      : lp_(lp), opt_(opt), m_(lp.rows()), n_struct_(lp.columns()) {
    build();
  }

  LpSolution run();

 private:
  void build();
  bool phase(const std::vector<double>& cost, bool phase_one);
  bool dual_cleanup(const std::vector<double>& cost);
  void perturb();
  void pivot(int r, int q, const Eigen::VectorXd& alpha, double theta,
             double dq);
  int price(const std::vector<double>& cost, double tol, bool bland);
  double reduced_cost(const std::vector<double>& cost, int j) const;
  void ftran(int j, Eigen::VectorXd& alpha) const;
  void recompute(const std::vector<double>& cost);
  double residual() const;
  void refactor();

  const LinearProgram& lp_;
  SimplexOptions opt_;
  int m_;
  int n_struct_;
  int n_all_ = 0;

  std::vector<int> start_, row_;
  std::vector<double> val_;
  std::vector<Kind> kind_;
  std::vector<double> flip_;
  Eigen::VectorXd b_;
  Eigen::VectorXd b_orig_;

  std::vector<int> basis_;
  std::vector<int> pos_;  // column -> basis row, -1 if nonbasic
  RowMajor binv_;
  Eigen::VectorXd xb_;
  Eigen::VectorXd pi_;
  bool phase_two_ = false;
  long iterations_ = 0;
  int next_ = 0;
  double b_scale_ = 1.0;
  LpStatus failure_ = LpStatus::kOptimal;
};

void Simplex::build() {
  flip_.assign(m_, 1.0);
  b_.resize(m_);
  b_scale_ = 1.0;
  for (int r = 0; r < m_; ++r) {
    if (lp_.rhs(r) < 0) flip_[r] = -1.0;
    b_[r] = flip_[r] * lp_.rhs(r);
    b_scale_ = std::max(b_scale_, std::abs(b_[r]));
  }
  start_.push_back(0);
  for (int j = 0; j < n_struct_; ++j) {
    for (int k = lp_.column_begin(j); k < lp_.column_end(j); ++k) {
      const int r = lp_.entry_row(k);
      row_.push_back(r);
      val_.push_back(flip_[r] * lp_.entry_value(k));
    }
    start_.push_back(static_cast<int>(row_.size()));
    kind_.push_back(Kind::kStructural);
  }
  std::vector<int> unit_slack(m_, -1);
  for (int r = 0; r < m_; ++r) {
    if (lp_.sense(r) == Sense::kEqual) continue;
    const double coef =
        flip_[r] * (lp_.sense(r) == Sense::kLessEqual ? 1.0 : -1.0);
    row_.push_back(r);
    val_.push_back(coef);
    start_.push_back(static_cast<int>(row_.size()));
    kind_.push_back(Kind::kSlack);
    if (coef > 0) unit_slack[r] = static_cast<int>(kind_.size()) - 1;
  }
  basis_.assign(m_, -1);
  for (int r = 0; r < m_; ++r) {
    if (unit_slack[r] >= 0) {
      basis_[r] = unit_slack[r];
      continue;
    }
    row_.push_back(r);
    val_.push_back(1.0);
    start_.push_back(static_cast<int>(row_.size()));
    kind_.push_back(Kind::kArtificial);
    basis_[r] = static_cast<int>(kind_.size()) - 1;
  }
  n_all_ = static_cast<int>(kind_.size());
  pos_.assign(n_all_, -1);
  for (int r = 0; r < m_; ++r) pos_[basis_[r]] = r;
  binv_ = RowMajor::Identity(m_, m_);
  xb_ = b_;
  pi_ = Eigen::VectorXd::Zero(m_);
}

double Simplex::reduced_cost(const std::vector<double>& cost, int j) const {
  double d = cost[j];
  for (int k = start_[j]; k < start_[j + 1]; ++k) d -= pi_[row_[k]] * val_[k];
  return d;
}

void Simplex::ftran(int j, Eigen::VectorXd& alpha) const {
  alpha.setZero(m_);
  for (int k = start_[j]; k < start_[j + 1]; ++k)
    alpha.noalias() += val_[k] * binv_.col(row_[k]);
}

int Simplex::price(const std::vector<double>& cost, double tol, bool bland) {
  const int n = n_all_;
  auto eligible = [&](int j) {
    return pos_[j] < 0 && kind_[j] != Kind::kArtificial;
  };
  if (bland) {
    for (int j = 0; j < n; ++j)
      if (eligible(j) && reduced_cost(cost, j) < -tol) return j;
    return -1;
  }
  const int block =
      opt_.pricing_block > 0
          ? opt_.pricing_block
          : std::max(64, static_cast<int>(4.0 * std::sqrt(double(n))));
  int best = -1;
  double best_d = -tol;
  int scanned = 0;
  int j = next_;
  int in_block = 0;
  while (scanned < n) {
    if (eligible(j)) {
      const double d = reduced_cost(cost, j);
      if (d < best_d) {
        best_d = d;
        best = j;
      }
    }
    ++scanned;
    j = j + 1 == n ? 0 : j + 1;
    if (++in_block == block) {
      if (best >= 0) break;
      in_block = 0;
    }
  }
  next_ = j;
  return best;
}

void Simplex::recompute(const std::vector<double>& cost) {
  xb_.noalias() = binv_ * b_;
  Eigen::VectorXd cb(m_);
  for (int r = 0; r < m_; ++r) cb[r] = cost[basis_[r]];
  pi_.noalias() = binv_.transpose() * cb;
}

double Simplex::residual() const {
  Eigen::VectorXd res = -b_;
  for (int r = 0; r < m_; ++r) {
    const int j = basis_[r];
    for (int k = start_[j]; k < start_[j + 1]; ++k)
      res[row_[k]] += val_[k] * xb_[r];
  }
  return res.size() ? res.cwiseAbs().maxCoeff() : 0.0;
}

void Simplex::refactor() {
  std::vector<Eigen::Triplet<double>> trip;
  for (int r = 0; r < m_; ++r) {
    const int j = basis_[r];
    for (int k = start_[j]; k < start_[j + 1]; ++k)
      trip.emplace_back(row_[k], r, val_[k]);
  }
  Eigen::SparseMatrix<double> basis(m_, m_);
  basis.setFromTriplets(trip.begin(), trip.end());
  basis.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(basis);
  if (lu.info() != Eigen::Success)
    throw SolverError("simplex basis became singular");
  const Eigen::MatrixXd inv =
      lu.solve(Eigen::MatrixXd::Identity(m_, m_));
  binv_ = inv;
}

bool Simplex::phase(const std::vector<double>& cost, bool phase_one) {
  double cmax = 1.0;
  for (double c : cost) cmax = std::max(cmax, std::abs(c));
  const double dtol = opt_.optimality_tolerance * cmax;
  const double ftol = opt_.feasibility_tolerance;
  const double ptol = opt_.pivot_tolerance;
  recompute(cost);

  Eigen::VectorXd alpha(m_);
  int degenerate_run = 0;
  int since_check = 0;
  bool verified = false;
  while (true) {
    if (iterations_ >= opt_.max_iterations) {
      failure_ = LpStatus::kIterationLimit;
      return false;
    }
    const bool bland = degenerate_run >= opt_.bland_after;
    const int q = price(cost, dtol, bland);
    if (q < 0) {
      if (verified) return true;
      // Confirm optimality on a freshly computed (and if needed
      // refactored) basis before accepting.
      if (residual() > 1e-9 * b_scale_) refactor();
      recompute(cost);
      verified = true;
      continue;
    }
    verified = false;

    ftran(q, alpha);
    double theta_max = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m_; ++i) {
      const double a = alpha[i];
      const bool fixed =
          !phase_one && kind_[basis_[i]] == Kind::kArtificial;
      if (a > ptol) {
        theta_max = std::min(theta_max, (xb_[i] + ftol) / a);
      } else if (fixed && a < -ptol) {
        theta_max = std::min(theta_max, (ftol - xb_[i]) / -a);
      }
    }
    if (!std::isfinite(theta_max)) {
      failure_ = LpStatus::kUnbounded;
      return false;
    }
    // Rounding can leave a basic value just beyond the tolerance.
    theta_max = std::max(theta_max, 0.0);
    int r = -1;
    double best = 0.0, best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m_; ++i) {
      const double a = alpha[i];
      const bool fixed =
          !phase_one && kind_[basis_[i]] == Kind::kArtificial;
      if (!(a > ptol || (fixed && a < -ptol))) continue;
      const double ratio = std::max(0.0, xb_[i] / a);
      if (!bland && ratio > theta_max) continue;
      if (bland) {
        if (ratio < best_ratio ||
            (ratio == best_ratio && r >= 0 && basis_[i] < basis_[r])) {
          best_ratio = ratio;
          r = i;
        }
      } else if (std::abs(a) > best) {
        best = std::abs(a);
        r = i;
      }
    }
    if (r < 0) {
      failure_ = LpStatus::kUnbounded;
      return false;
    }

    const double theta = std::max(0.0, xb_[r] / alpha[r]);
    const double dq = reduced_cost(cost, q);
    degenerate_run = theta * std::abs(dq) <= 1e-14 ? degenerate_run + 1 : 0;
    pivot(r, q, alpha, theta, dq);
    ++iterations_;

    if (++since_check >= 100) {
      since_check = 0;
      recompute(cost);
      if (residual() > 1e-10 * b_scale_) {
        refactor();
        recompute(cost);
      }
    }
  }
}

void Simplex::pivot(int r, int q, const Eigen::VectorXd& alpha, double theta,
                    double dq) {
  const double ar = alpha[r];
  xb_.noalias() -= theta * alpha;
  xb_[r] = theta;
  const Eigen::RowVectorXd row_r = binv_.row(r) / ar;
  pi_.noalias() += dq * row_r.transpose();
  for (int i = 0; i < m_; ++i) {
    if (i == r || alpha[i] == 0.0) continue;
    binv_.row(i).noalias() -= alpha[i] * row_r;
  }
  binv_.row(r) = row_r;
  pos_[basis_[r]] = -1;
  basis_[r] = q;
  pos_[q] = r;
}

// Shifts the right-hand side so that every basic non-artificial variable is
// strictly positive: b += B eps. Consistent even with redundant rows, and
// breaks the ties that make zero-rhs problems stall.
void Simplex::perturb() {
  std::mt19937_64 rng(0x7a3d15u);
  std::uniform_real_distribution<double> u(1.0, 2.0);
  const double base = 1e-7 * b_scale_;
  Eigen::VectorXd eps = Eigen::VectorXd::Zero(m_);
  for (int r = 0; r < m_; ++r)
    if (kind_[basis_[r]] != Kind::kArtificial)
      eps[r] = base * u(rng) * (1.0 + std::abs(xb_[r]) / b_scale_);
  for (int r = 0; r < m_; ++r) {
    const int j = basis_[r];
    for (int k = start_[j]; k < start_[j + 1]; ++k)
      b_[row_[k]] += val_[k] * eps[r];
  }
}

// Dual simplex on a dual feasible basis: drives basic variables back into
// their bounds (>= 0, or == 0 for artificials) after the rhs is restored.
bool Simplex::dual_cleanup(const std::vector<double>& cost) {
  const double ftol = opt_.feasibility_tolerance;
  const double ptol = opt_.pivot_tolerance;
  recompute(cost);
  Eigen::VectorXd alpha(m_);
  int since_check = 0;
  while (true) {
    if (iterations_ >= opt_.max_iterations) {
      failure_ = LpStatus::kIterationLimit;
      return false;
    }
    int r = -1;
    double worst = ftol;
    for (int i = 0; i < m_; ++i) {
      const bool fixed = kind_[basis_[i]] == Kind::kArtificial;
      const double v = fixed ? std::abs(xb_[i]) : -xb_[i];
      if (v > worst) {
        worst = v;
        r = i;
      }
    }
    if (r < 0) return true;
    const double sign = xb_[r] < 0.0 ? -1.0 : 1.0;
    int q = -1;
    double best_ratio = std::numeric_limits<double>::infinity(), best_a = 0.0;
    for (int j = 0; j < n_all_; ++j) {
      if (pos_[j] >= 0 || kind_[j] == Kind::kArtificial) continue;
      double a = 0.0;
      for (int k = start_[j]; k < start_[j + 1]; ++k)
        a += binv_(r, row_[k]) * val_[k];
      a *= sign;
      if (a <= ptol) continue;
      const double ratio = std::max(0.0, reduced_cost(cost, j)) / a;
      if (ratio < best_ratio - 1e-15 ||
          (ratio <= best_ratio + 1e-15 && a > best_a)) {
        best_ratio = ratio;
        best_a = a;
        q = j;
      }
    }
    if (q < 0) {
      failure_ = LpStatus::kInfeasible;
      return false;
    }
    ftran(q, alpha);
    pivot(r, q, alpha, xb_[r] / alpha[r], reduced_cost(cost, q));
    ++iterations_;
    if (++since_check >= 100) {
      since_check = 0;
      recompute(cost);
      if (residual() > 1e-10 * b_scale_) {
        refactor();
        recompute(cost);
      }
    }
  }
}

LpSolution Simplex::run() {
  LpSolution out;
  bool any_artificial = false;
  for (int r = 0; r < m_; ++r)
    any_artificial |= kind_[basis_[r]] == Kind::kArtificial;

  if (any_artificial) {
    std::vector<double> c1(n_all_, 0.0);
    for (int j = 0; j < n_all_; ++j)
      if (kind_[j] == Kind::kArtificial) c1[j] = 1.0;
    if (!phase(c1, true)) {
      out.status = failure_ == LpStatus::kUnbounded ? LpStatus::kInfeasible
                                                    : failure_;
      out.iterations = iterations_;
      return out;
    }
    double infeas = 0.0;
    for (int r = 0; r < m_; ++r)
      if (kind_[basis_[r]] == Kind::kArtificial) infeas += std::max(0.0, xb_[r]);
    if (infeas > opt_.feasibility_tolerance * b_scale_) {
      out.status = LpStatus::kInfeasible;
      out.iterations = iterations_;
      return out;
    }
  }

  std::vector<double> c2(n_all_, 0.0);
  for (int j = 0; j < n_struct_; ++j) c2[j] = lp_.cost(j);
  next_ = 0;
  b_orig_ = b_;
  perturb();
  bool ok = phase(c2, false);
  b_ = b_orig_;
  for (int round = 0; ok && round < 8; ++round) {
    const long before = iterations_;
    ok = dual_cleanup(c2) && phase(c2, false);
    if (iterations_ == before) break;
  }
  out.iterations = iterations_;
  if (!ok) {
    out.status = failure_;
    return out;
  }
  out.status = LpStatus::kOptimal;
  out.x.assign(n_struct_, 0.0);
  for (int r = 0; r < m_; ++r)
    if (basis_[r] < n_struct_) out.x[basis_[r]] = std::max(0.0, xb_[r]);
  out.objective = 0.0;
  for (int j = 0; j < n_struct_; ++j) out.objective += lp_.cost(j) * out.x[j];
  out.row_duals.resize(m_);
  for (int r = 0; r < m_; ++r) out.row_duals[r] = flip_[r] * pi_[r];
  return out;
}

}  // namespace

LpSolution solve(const LinearProgram& lp, const SimplexOptions& options) {
  if (lp.rows() == 0) {
    LpSolution out;
    out.x.assign(lp.columns(), 0.0);
    out.status = LpStatus::kOptimal;
    for (int j = 0; j < lp.columns(); ++j)
      if (lp.cost(j) < 0) out.status = LpStatus::kUnbounded;
    return out;
  }
  Simplex s(lp, options);
  return s.run();
}

}  // namespace tadist::lp
