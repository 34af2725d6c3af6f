#include "tadist/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "tadist/error.hpp"

namespace tadist {

MetricSpace::MetricSpace(Eigen::MatrixXd dist,
                         std::vector<std::size_t> boundary,
                         std::vector<double> weights,
                         std::vector<std::string> labels,
                         std::vector<double> coords)
    : n_(static_cast<std::size_t>(dist.rows())),
      dist_(std::move(dist)),
      boundary_(std::move(boundary)),
      weights_(std::move(weights)),
      labels_(std::move(labels)),
      coords_(std::move(coords)) {
  if (n_ == 0) throw ConfigError("metric space must have at least one point");
  if (dist_.cols() != dist_.rows())
    throw ConfigError("distance matrix must be square");
  if (weights_.size() != n_)
    throw ConfigError("weights must have one entry per point");
  for (double w : weights_) {
    if (!(w > 0.0) || !std::isfinite(w))
      throw ConfigError("reference weights must be strictly positive");
  }
  if (!labels_.empty() && labels_.size() != n_)
    throw ConfigError("labels must have one entry per point");
  if (!coords_.empty() && coords_.size() != n_)
    throw ConfigError("coords must have one entry per point");
  if (!dist_.allFinite()) throw ConfigError("distances must be finite");

  std::sort(boundary_.begin(), boundary_.end());
  boundary_.erase(std::unique(boundary_.begin(), boundary_.end()),
                  boundary_.end());
  on_boundary_.assign(n_, 0);
  for (std::size_t z : boundary_) {
    if (z >= n_) throw ConfigError("boundary index out of range");
    on_boundary_[z] = 1;
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (!on_boundary_[i]) interior_.push_back(i);
  }

  nearest_.assign(n_, 0);
  if (!boundary_.empty()) {
    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t best = boundary_.front();
      for (std::size_t z : boundary_) {
        if (dist_(i, z) < dist_(i, best)) best = z;
      }
      nearest_[i] = best;
    }
  }
}

double MetricSpace::total_weight() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

std::size_t MetricSpace::nearest_boundary(std::size_t i) const {
  if (boundary_.empty())
    throw ConfigError("operation requires a nonempty boundary set");
  return nearest_[i];
}

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kNegativeEntry: return "negative-entry";
    case ViolationKind::kNonzeroDiagonal: return "nonzero-diagonal";
    case ViolationKind::kZeroOffDiagonal: return "zero-off-diagonal";
    case ViolationKind::kAsymmetry: return "asymmetry";
    case ViolationKind::kTriangle: return "triangle";
    case ViolationKind::kBoundaryEmpty: return "boundary-empty";
    case ViolationKind::kBoundaryFull: return "boundary-full";
  }
  return "unknown";
}

ValidationReport validate_metric(const MetricSpace& space, double tolerance) {
  ValidationReport report;
  const auto& d = space.distances();
  const std::size_t n = space.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(d(i, i)) > tolerance)
      report.violations.push_back(
          {ViolationKind::kNonzeroDiagonal, i, i, i, std::abs(d(i, i))});
    for (std::size_t j = 0; j < n; ++j) {
      if (d(i, j) < -tolerance)
        report.violations.push_back(
            {ViolationKind::kNegativeEntry, i, j, j, -d(i, j)});
      if (i < j) {
        const double gap = std::abs(d(i, j) - d(j, i));
        if (gap > tolerance)
          report.violations.push_back(
              {ViolationKind::kAsymmetry, i, j, j, gap});
        if (std::min(d(i, j), d(j, i)) <= tolerance)
          report.violations.push_back(
              {ViolationKind::kZeroOffDiagonal, i, j, j, 0.0});
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double excess = d(i, j) - d(i, k) - d(k, j);
        if (excess > tolerance)
          report.violations.push_back(
              {ViolationKind::kTriangle, i, j, k, excess});
      }
    }
  }
  if (space.boundary().empty())
    report.violations.push_back({ViolationKind::kBoundaryEmpty});
  else if (space.interior().empty())
    report.violations.push_back({ViolationKind::kBoundaryFull});
  return report;
}

double boundary_distance(const MetricSpace& space, std::size_t i) {
  return space.dist(i, space.nearest_boundary(i));
}

double star_metric(const MetricSpace& space, std::size_t i, std::size_t j) {
  if (space.boundary().empty())
    throw ConfigError("star metric requires a nonempty boundary set");
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t z : space.boundary())
    best = std::min(best, space.dist(i, z) + space.dist(z, j));
  return best;
}

double dagger_metric(const MetricSpace& space, std::size_t i, std::size_t j) {
  return boundary_distance(space, i) + boundary_distance(space, j);
}

double shortcut_metric(const MetricSpace& space, std::size_t i,
                       std::size_t j) {
  return std::min(space.dist(i, j), dagger_metric(space, i, j));
}

Eigen::VectorXd boundary_distances(const MetricSpace& space) {
  Eigen::VectorXd out(space.size());
  for (std::size_t i = 0; i < space.size(); ++i)
    out[i] = boundary_distance(space, i);
  return out;
}

Eigen::MatrixXd star_matrix(const MetricSpace& space) {
  const std::size_t n = space.size();
  Eigen::MatrixXd out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j)
      out(i, j) = out(j, i) = star_metric(space, i, j);
  return out;
}

Eigen::MatrixXd shortcut_matrix(const MetricSpace& space) {
  const Eigen::VectorXd b = boundary_distances(space);
  const std::size_t n = space.size();
  Eigen::MatrixXd out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      out(i, j) = std::min(space.dist(i, j), b[i] + b[j]);
  return out;
}

namespace {

SpacePtr from_line_coords(std::vector<double> coords,
                          std::vector<std::size_t> boundary,
                          std::vector<double> weights) {
  const std::size_t n = coords.size();
  Eigen::MatrixXd d(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d(i, j) = std::abs(coords[i] - coords[j]);
  std::vector<std::string> labels;
  labels.reserve(n);
  for (double x : coords) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    labels.emplace_back(buf);
  }
  return std::make_shared<const MetricSpace>(std::move(d), std::move(boundary),
                                             std::move(weights),
                                             std::move(labels),
                                             std::move(coords));
}

}  // namespace

SpacePtr interval_space(double a, double b, std::size_t n_points) {
  if (n_points < 3) throw ConfigError("interval grid needs at least 3 points");
  if (!(b > a)) throw ConfigError("degenerate interval");
  const double h = (b - a) / static_cast<double>(n_points - 1);
  std::vector<double> coords(n_points);
  std::vector<double> weights(n_points, h);
  for (std::size_t i = 0; i < n_points; ++i)
    coords[i] = a + h * static_cast<double>(i);
  coords.back() = b;
  weights.front() = weights.back() = h / 2.0;
  return from_line_coords(std::move(coords), {0, n_points - 1},
                          std::move(weights));
}

SpacePtr cycle_space(double circumference, std::size_t n_points,
                     std::vector<std::size_t> boundary) {
  if (n_points < 3) throw ConfigError("cycle needs at least 3 points");
  if (!(circumference > 0)) throw ConfigError("degenerate cycle");
  const double h = circumference / static_cast<double>(n_points);
  Eigen::MatrixXd d(n_points, n_points);
  std::vector<double> coords(n_points);
  for (std::size_t i = 0; i < n_points; ++i) {
    coords[i] = h * static_cast<double>(i);
    for (std::size_t j = 0; j < n_points; ++j) {
      const std::size_t steps = i > j ? i - j : j - i;
      d(i, j) = h * static_cast<double>(std::min(steps, n_points - steps));
    }
  }
  return std::make_shared<const MetricSpace>(
      std::move(d), std::move(boundary), std::vector<double>(n_points, h),
      std::vector<std::string>{}, std::move(coords));
}

SpacePtr line_space(std::vector<double> coords,
                    std::vector<std::size_t> boundary,
                    std::vector<double> weights) {
  if (weights.empty()) weights.assign(coords.size(), 1.0);
  return from_line_coords(std::move(coords), std::move(boundary),
                          std::move(weights));
}

std::optional<std::size_t> find_coordinate(const MetricSpace& space,
                                           double x) {
  const auto c = space.coords();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (std::abs(c[i] - x) <= 1e-9) return i;
  }
  return std::nullopt;
}

// Gluing ---------------------------------------------------------------------

GluedSpace::GluedSpace(SpacePtr base, std::size_t k)
    : base_(std::move(base)), k_(k) {
  if (k_ < 2) throw ConfigError("gluing needs at least two sheets");
  const MetricSpace& b = *base_;
  if (b.boundary().empty())
    throw ConfigError("gluing requires a nonempty boundary set");
  const std::size_t n = b.size();
  const auto interior = b.interior();
  const auto boundary = b.boundary();
  const std::size_t m = k_ * interior.size() + boundary.size();

  lookup_.assign(k_ * n, 0);
  for (std::size_t s = 0; s < k_; ++s) {
    for (std::size_t y : interior) {
      lookup_[s * n + y] = sheet_of_.size();
      sheet_of_.push_back(static_cast<int>(s));
      base_of_.push_back(y);
    }
  }
  for (std::size_t z : boundary) {
    for (std::size_t s = 0; s < k_; ++s) lookup_[s * n + z] = sheet_of_.size();
    sheet_of_.push_back(kSharedSheet);
    base_of_.push_back(z);
  }

  const Eigen::MatrixXd star = star_matrix(b);
  Eigen::MatrixXd d(m, m);
  std::vector<double> weights(m);
  std::vector<std::string> labels(m);
  std::vector<std::size_t> shared;
  for (std::size_t g = 0; g < m; ++g) {
    const std::size_t x = base_of_[g];
    const bool on_z = sheet_of_[g] == kSharedSheet;
    weights[g] = on_z ? b.weight(x) : b.weight(x) / static_cast<double>(k_);
    const std::string name =
        b.labels().empty() ? std::to_string(x) : b.labels()[x];
    labels[g] = on_z ? name : name + "@" + std::to_string(sheet_of_[g]);
    if (on_z) shared.push_back(g);
    for (std::size_t h = 0; h < m; ++h) {
      const std::size_t y = base_of_[h];
      const bool cross = !on_z && sheet_of_[h] != kSharedSheet &&
                         sheet_of_[h] != sheet_of_[g];
      d(g, h) = cross ? star(x, y) : b.dist(x, y);
    }
  }
  space_ = std::make_shared<const MetricSpace>(std::move(d), std::move(shared),
                                               std::move(weights),
                                               std::move(labels));
}

std::size_t GluedSpace::index(std::size_t sheet, std::size_t x) const {
  if (sheet >= k_ || x >= base_->size())
    throw ConfigError("glued index out of range");
  return lookup_[sheet * base_->size() + x];
}

GluedSpace glue(SpacePtr base, std::size_t k) {
  return GluedSpace(std::move(base), k);
}

std::size_t mirror(const GluedSpace& g, std::size_t point,
                   std::size_t target_sheet) {
  if (point >= g.size()) throw ConfigError("glued point out of range");
  if (target_sheet >= g.sheets()) throw ConfigError("invalid target sheet");
  if (g.sheet_of(point) == kSharedSheet) return point;
  return g.index(target_sheet, g.base_of(point));
}

std::size_t mirror(const GluedSpace& g, std::size_t point) {
  if (g.sheets() != 2)
    throw ConfigError("sheet swap is only defined for the doubling");
  if (point >= g.size()) throw ConfigError("glued point out of range");
  const int s = g.sheet_of(point);
  if (s == kSharedSheet) return point;
  return g.index(s == 0 ? 1 : 0, g.base_of(point));
}

}  // namespace tadist
