#pragma once

#include <string>
#include <vector>

#include "tadist/measure.hpp"
#include "tadist/metric_space.hpp"
#include "tadist/transport.hpp"

namespace tadist {

/// Tolerance for sigma+ = sigma- on the boundary.
inline constexpr double kBoundaryAgreementTolerance = 1e-12;

/// Invariant violations of a candidate pair (plus, minus); empty if valid.
std::vector<std::string> charged_violations(const DiscreteMeasure& plus,
                                            const DiscreteMeasure& minus);

/// A pair of subprobabilities that agree on Z and carry total mass one.
/// Construction validates and never renormalises.
class ChargedMeasure {
 public:
  ChargedMeasure(DiscreteMeasure plus, DiscreteMeasure minus);

  const DiscreteMeasure& plus() const { return plus_; }
  const DiscreteMeasure& minus() const { return minus_; }
  const MetricSpace& space() const { return plus_.space(); }
  const SpacePtr& space_ptr() const { return plus_.space_ptr(); }

 private:
  DiscreteMeasure plus_;
  DiscreteMeasure minus_;
};

/// sigma+ - sigma-.
SignedMeasure effective(const ChargedMeasure& s);
/// sigma+ + sigma-.
DiscreteMeasure total(const ChargedMeasure& s);
/// mu -> (mu/2, mu/2) for a probability measure mu.
ChargedMeasure lift(const DiscreteMeasure& mu);

/// Charged measure -> measure on the doubling (plus on sheet 0, minus on
/// sheet 1, both boundary parts added on the shared copy of Z).
DiscreteMeasure phi(const ChargedMeasure& s, const GluedSpace& g);
/// Inverse of phi: restrict to the sheets and split Z mass in halves.
ChargedMeasure psi(const DiscreteMeasure& h, const GluedSpace& g);

/// W~_p, computed as W_p on the doubling between phi(s) and phi(t).
TransportResult tilde_w(const ChargedMeasure& s, const ChargedMeasure& t,
                        double p, const GluedSpace& g);
TransportResult tilde_w(const ChargedMeasure& s, const ChargedMeasure& t,
                        double p);

/// Relative entropy sum u log u w with density u = mu / w (0 log 0 = 0).
double entropy(const DiscreteMeasure& mu);
/// Ent(sigma+) + Ent(sigma-) w.r.t. the space's reference weights.
double charged_entropy(const ChargedMeasure& s);

}  // namespace tadist
