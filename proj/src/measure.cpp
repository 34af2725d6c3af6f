#include "tadist/measure.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "tadist/error.hpp"

namespace tadist {

DiscreteMeasure::DiscreteMeasure(SpacePtr space, std::vector<double> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (!space_) throw ConfigError("measure needs a space");
  if (weights_.size() != space_->size())
    throw ConfigError("measure has " + std::to_string(weights_.size()) +
                      " weights for a space of " +
                      std::to_string(space_->size()) + " points");
  for (double& w : weights_) {
    if (!std::isfinite(w)) throw ConfigError("measure weights must be finite");
    if (w < 0.0) {
      // Round-off from flows and LP recoveries.
      if (w < -1e-12) throw ConfigError("measure weights must be nonnegative");
      w = 0.0;
    }
  }
}

DiscreteMeasure DiscreteMeasure::zero(SpacePtr space) {
  const std::size_t n = space->size();
  return DiscreteMeasure(std::move(space), std::vector<double>(n, 0.0));
}

DiscreteMeasure DiscreteMeasure::dirac(SpacePtr space, std::size_t point,
                                       double mass) {
  if (point >= space->size()) throw ConfigError("dirac point out of range");
  std::vector<double> w(space->size(), 0.0);
  w[point] = mass;
  return DiscreteMeasure(std::move(space), std::move(w));
}

double DiscreteMeasure::mass() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

std::vector<std::size_t> DiscreteMeasure::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < weights_.size(); ++i)
    if (weights_[i] > 0.0) out.push_back(i);
  return out;
}

DiscreteMeasure DiscreteMeasure::scaled(double factor) const {
  if (factor < 0.0) throw DomainError("measures scale by nonnegative factors");
  std::vector<double> w(weights_);
  for (double& x : w) x *= factor;
  return DiscreteMeasure(space_, std::move(w));
}

DiscreteMeasure DiscreteMeasure::operator+(const DiscreteMeasure& other) const {
  require_same_space(*space_, other.space());
  std::vector<double> w(weights_);
  for (std::size_t i = 0; i < w.size(); ++i) w[i] += other[i];
  return DiscreteMeasure(space_, std::move(w));
}

SignedMeasure::SignedMeasure(SpacePtr space, std::vector<double> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
  if (!space_) throw ConfigError("measure needs a space");
  if (weights_.size() != space_->size())
    throw ConfigError("signed measure size does not match its space");
  for (double w : weights_)
    if (!std::isfinite(w)) throw ConfigError("measure weights must be finite");
}

double SignedMeasure::mass() const {
  return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

void require_same_space(const MetricSpace& a, const MetricSpace& b) {
  if (&a != &b) throw ConfigError("measures live on different spaces");
}

void require_subprobability(const DiscreteMeasure& mu, bool interior_only) {
  if (mu.mass() > 1.0 + kMassTolerance)
    throw MassError("subprobability has mass " + std::to_string(mu.mass()));
  if (interior_only) {
    for (std::size_t z : mu.space().boundary())
      if (mu[z] > 0.0)
        throw MassError("subprobability on the interior charges boundary point " +
                        std::to_string(z));
  }
}

void require_equal_mass(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  if (std::abs(mu.mass() - nu.mass()) > kMassTolerance)
    throw MassError("masses differ: " + std::to_string(mu.mass()) + " vs " +
                    std::to_string(nu.mass()));
}

}  // namespace tadist
