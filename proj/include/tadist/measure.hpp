#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "tadist/metric_space.hpp"

namespace tadist {

/// Slack allowed on "mass <= 1" and "equal mass" preconditions.
inline constexpr double kMassTolerance = 1e-10;

/// Nonnegative finite weights attached to the points of a metric space.
class DiscreteMeasure {
 public:
  DiscreteMeasure(SpacePtr space, std::vector<double> weights);

  static DiscreteMeasure zero(SpacePtr space);
  static DiscreteMeasure dirac(SpacePtr space, std::size_t point,
                               double mass = 1.0);

  const MetricSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  std::size_t size() const { return weights_.size(); }
  std::span<const double> weights() const { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }
  double mass() const;
  /// Indices with strictly positive weight.
  std::vector<std::size_t> support() const;

  DiscreteMeasure scaled(double factor) const;
  DiscreteMeasure operator+(const DiscreteMeasure& other) const;

 private:
  SpacePtr space_;
  std::vector<double> weights_;
};

/// Real-valued weights, e.g. the difference of two measures.
class SignedMeasure {
 public:
  SignedMeasure(SpacePtr space, std::vector<double> weights);

  const MetricSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  std::span<const double> weights() const { return weights_; }
  double operator[](std::size_t i) const { return weights_[i]; }
  double mass() const;

 private:
  SpacePtr space_;
  std::vector<double> weights_;
};

/// Throws ConfigError unless both measures live on the same space object.
void require_same_space(const MetricSpace& a, const MetricSpace& b);

/// Throws MassError if mass(mu) > 1 + tolerance. With interior_only, also
/// rejects mass on the boundary set (subprobabilities on Y).
void require_subprobability(const DiscreteMeasure& mu, bool interior_only);

/// Throws MassError if the masses differ by more than kMassTolerance.
void require_equal_mass(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

}  // namespace tadist
