#include "tadist/charged.hpp"

#include <cmath>
#include <cstdio>

#include "tadist/error.hpp"

namespace tadist {

namespace {

void require_doubling_of(const GluedSpace& g, const MetricSpace& base) {
  if (g.sheets() != 2) throw ConfigError("expected the doubling (k = 2)");
  if (&g.base() != &base)
    throw ConfigError("glued space is not built on this measure's space");
}

std::string format(const char* fmt, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, fmt, a, b);
  return buf;
}

}  // namespace

std::vector<std::string> charged_violations(const DiscreteMeasure& plus,
                                            const DiscreteMeasure& minus) {
  std::vector<std::string> out;
  if (&plus.space() != &minus.space()) {
    out.emplace_back("plus and minus live on different spaces");
    return out;
  }
  const double m = plus.mass() + minus.mass();
  if (std::abs(m - 1.0) > kMassTolerance)
    out.push_back(format("total mass %.17g differs from 1", m));
  for (std::size_t z : plus.space().boundary()) {
    const double gap = std::abs(plus[z] - minus[z]);
    if (gap > kBoundaryAgreementTolerance)
      out.push_back(format("plus and minus disagree on boundary point %.0f by %.3g",
                           static_cast<double>(z), gap));
  }
  return out;
}

ChargedMeasure::ChargedMeasure(DiscreteMeasure plus, DiscreteMeasure minus)
    : plus_(std::move(plus)), minus_(std::move(minus)) {
  const auto v = charged_violations(plus_, minus_);
  if (!v.empty()) {
    if (v.front().find("mass") != std::string::npos)
      throw MassError("invalid charged measure: " + v.front());
    throw ConfigError("invalid charged measure: " + v.front());
  }
}

SignedMeasure effective(const ChargedMeasure& s) {
  std::vector<double> w(s.plus().size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = s.plus()[i] - s.minus()[i];
  return SignedMeasure(s.space_ptr(), std::move(w));
}

DiscreteMeasure total(const ChargedMeasure& s) { return s.plus() + s.minus(); }

ChargedMeasure lift(const DiscreteMeasure& mu) {
  if (std::abs(mu.mass() - 1.0) > kMassTolerance)
    throw MassError("lift expects a probability measure");
  return ChargedMeasure(mu.scaled(0.5), mu.scaled(0.5));
}

DiscreteMeasure phi(const ChargedMeasure& s, const GluedSpace& g) {
  require_doubling_of(g, s.space());
  std::vector<double> w(g.size(), 0.0);
  for (std::size_t h = 0; h < g.size(); ++h) {
    const std::size_t x = g.base_of(h);
    switch (g.sheet_of(h)) {
      case 0: w[h] = s.plus()[x]; break;
      case 1: w[h] = s.minus()[x]; break;
      default: w[h] = s.plus()[x] + s.minus()[x]; break;
    }
  }
  return DiscreteMeasure(g.space_ptr(), std::move(w));
}

ChargedMeasure psi(const DiscreteMeasure& h, const GluedSpace& g) {
  if (g.sheets() != 2) throw ConfigError("expected the doubling (k = 2)");
  if (&h.space() != &g.space())
    throw ConfigError("measure does not live on this glued space");
  if (std::abs(h.mass() - 1.0) > kMassTolerance)
    throw MassError("psi expects a probability measure on the doubling");
  const std::size_t n = g.base().size();
  std::vector<double> plus(n, 0.0), minus(n, 0.0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const std::size_t x = g.base_of(k);
    switch (g.sheet_of(k)) {
      case 0: plus[x] = h[k]; break;
      case 1: minus[x] = h[k]; break;
      default:
        plus[x] = 0.5 * h[k];
        minus[x] = 0.5 * h[k];
        break;
    }
  }
  return ChargedMeasure(DiscreteMeasure(g.base_ptr(), std::move(plus)),
                        DiscreteMeasure(g.base_ptr(), std::move(minus)));
}

TransportResult tilde_w(const ChargedMeasure& s, const ChargedMeasure& t,
                        double p, const GluedSpace& g) {
  require_same_space(s.space(), t.space());
  return wasserstein(phi(s, g), phi(t, g), p);
}

TransportResult tilde_w(const ChargedMeasure& s, const ChargedMeasure& t,
                        double p) {
  require_same_space(s.space(), t.space());
  const GluedSpace g = glue(s.space_ptr(), 2);
  return tilde_w(s, t, p, g);
}

double entropy(const DiscreteMeasure& mu) {
  const MetricSpace& s = mu.space();
  double e = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (mu[i] <= 0.0) continue;
    const double u = mu[i] / s.weight(i);
    e += u * std::log(u) * s.weight(i);
  }
  return e;
}

double charged_entropy(const ChargedMeasure& s) {
  return entropy(s.plus()) + entropy(s.minus());
}

}  // namespace tadist
