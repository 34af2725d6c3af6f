#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace tadist {

/// Absolute tolerance used when checking the metric axioms.
inline constexpr double kMetricTolerance = 1e-12;

/// A finite metric space X with a boundary set Z and a reference measure.
///
/// Points are indexed 0..n-1. The complement Y of Z is the interior. The
/// distance matrix is stored densely; construction only checks shapes and
/// indices, the metric axioms are checked by validate_metric().
class MetricSpace {
 public:
  MetricSpace(Eigen::MatrixXd dist, std::vector<std::size_t> boundary,
              std::vector<double> weights,
              std::vector<std::string> labels = {},
              std::vector<double> coords = {});

  std::size_t size() const { return n_; }
  double dist(std::size_t i, std::size_t j) const { return dist_(i, j); }
  const Eigen::MatrixXd& distances() const { return dist_; }

  std::span<const std::size_t> boundary() const { return boundary_; }
  std::span<const std::size_t> interior() const { return interior_; }
  bool is_boundary(std::size_t i) const { return on_boundary_[i] != 0; }

  std::span<const double> weights() const { return weights_; }
  double weight(std::size_t i) const { return weights_[i]; }
  double total_weight() const;

  std::span<const std::string> labels() const { return labels_; }
  /// Embedding coordinates (one per point) when the space came from a builder.
  std::span<const double> coords() const { return coords_; }

  /// Nearest boundary point of i (first one on ties). Throws ConfigError if Z
  /// is empty.
  std::size_t nearest_boundary(std::size_t i) const;

 private:
  std::size_t n_;
  Eigen::MatrixXd dist_;
  std::vector<std::size_t> boundary_;
  std::vector<std::size_t> interior_;
  std::vector<char> on_boundary_;
  std::vector<double> weights_;
  std::vector<std::string> labels_;
  std::vector<double> coords_;
  std::vector<std::size_t> nearest_;
};

using SpacePtr = std::shared_ptr<const MetricSpace>;

enum class ViolationKind {
  kNegativeEntry,
  kNonzeroDiagonal,
  kZeroOffDiagonal,
  kAsymmetry,
  kTriangle,
  kBoundaryEmpty,
  kBoundaryFull,
};

struct Violation {
  ViolationKind kind;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;  // middle point of a triangle witness (i, k, j)
  double excess = 0.0;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

std::string to_string(ViolationKind kind);

/// Lists every violated axiom. Triangle violations carry a witness triple
/// with d(i,j) > d(i,k) + d(k,j) + tolerance.
ValidationReport validate_metric(const MetricSpace& space,
                                 double tolerance = kMetricTolerance);

/// min_{z in Z} d(i,z).
double boundary_distance(const MetricSpace& space, std::size_t i);

/// Particle/antiparticle distance: min_{z in Z} d(i,z) + d(z,j).
double star_metric(const MetricSpace& space, std::size_t i, std::size_t j);

/// boundary_distance(i) + boundary_distance(j).
double dagger_metric(const MetricSpace& space, std::size_t i, std::size_t j);

/// min{ d(i,j), boundary_distance(i) + boundary_distance(j) }.
double shortcut_metric(const MetricSpace& space, std::size_t i,
                       std::size_t j);

/// Full n x n matrices of the derived metrics.
Eigen::MatrixXd star_matrix(const MetricSpace& space);
Eigen::MatrixXd shortcut_matrix(const MetricSpace& space);
Eigen::VectorXd boundary_distances(const MetricSpace& space);

// Builders -----------------------------------------------------------------

/// Uniform grid a = x_0 < ... < x_{n-1} = b with Z = {a, b}. Weights follow
/// the trapezoidal rule: h in the interior, h/2 at both ends.
SpacePtr interval_space(double a, double b, std::size_t n_points);

/// Uniform cycle of the given circumference. Z may be empty; such a space is
/// representable but every boundary-based operation rejects it.
SpacePtr cycle_space(double circumference, std::size_t n_points,
                     std::vector<std::size_t> boundary = {});

/// Arbitrary points on the real line with |x - y| distances. Without explicit
/// weights every point gets weight 1.
SpacePtr line_space(std::vector<double> coords,
                    std::vector<std::size_t> boundary,
                    std::vector<double> weights = {});

/// Index of the grid node at coordinate x (within 1e-9), if any.
std::optional<std::size_t> find_coordinate(const MetricSpace& space,
                                           double x);

// Gluing -------------------------------------------------------------------

/// Sheet tag of the shared boundary copy in a glued space.
inline constexpr int kSharedSheet = -1;

/// The k-fold gluing of X along Z.
///
/// Point order: sheet 0 interior (base order), sheet 1 interior, ..., then
/// the shared boundary points (base order). For k = 2 sheet 0 is the "+"
/// sheet and sheet 1 the "-" sheet.
class GluedSpace {
 public:
  GluedSpace(SpacePtr base, std::size_t k);

  const MetricSpace& base() const { return *base_; }
  const SpacePtr& base_ptr() const { return base_; }
  /// The glued metric d^ and measure as a MetricSpace whose boundary is the
  /// shared copy of Z.
  const MetricSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }

  std::size_t sheets() const { return k_; }
  std::size_t size() const { return space_->size(); }

  /// Sheet of a glued point, kSharedSheet for the shared boundary.
  int sheet_of(std::size_t g) const { return sheet_of_[g]; }
  std::size_t base_of(std::size_t g) const { return base_of_[g]; }
  /// Glued index of base point x seen from the given sheet.
  std::size_t index(std::size_t sheet, std::size_t x) const;

 private:
  SpacePtr base_;
  std::size_t k_;
  SpacePtr space_;
  std::vector<int> sheet_of_;
  std::vector<std::size_t> base_of_;
  std::vector<std::size_t> lookup_;  // sheet * n + x -> glued index
};

/// Throws ConfigError if k < 2.
GluedSpace glue(SpacePtr base, std::size_t k);

/// Same base point on target_sheet; boundary points are fixed.
std::size_t mirror(const GluedSpace& g, std::size_t point,
                   std::size_t target_sheet);

/// For k = 2: swap of the two sheets.
std::size_t mirror(const GluedSpace& g, std::size_t point);

}  // namespace tadist
