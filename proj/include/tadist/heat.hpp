#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "tadist/charged.hpp"
#include "tadist/measure.hpp"
#include "tadist/metric_space.hpp"

namespace tadist {

enum class Flavor {
  /// Reflecting flow, mass conserving.
  kNeumann,
  /// Flow killed on Z: runs on the interior, functions are zero on Z.
  kDirichlet,
};

/// A reversible Markov generator on a finite space,
///   L f(x) = (1/w_x) sum_y c_xy (f(y) - f(x)),
/// with symmetric conductances c and the space's reference weights w.
/// Semigroups are evaluated exactly through the eigendecomposition of the
/// symmetrised generator, for both the full space (Neumann) and the interior
/// block (Dirichlet). Immutable after construction.
class HeatSystem {
 public:
  HeatSystem(SpacePtr space, Eigen::MatrixXd conductance, double mesh);

  const MetricSpace& space() const { return *space_; }
  const SpacePtr& space_ptr() const { return space_; }
  const Eigen::MatrixXd& conductance() const { return conductance_; }
  /// Grid spacing (longest edge for general graphs).
  double mesh() const { return mesh_; }
  std::size_t size() const { return space_->size(); }

  /// L as a dense matrix.
  const Eigen::MatrixXd& generator() const { return generator_; }
  /// L with the rows and columns at Z set to zero.
  Eigen::MatrixXd generator0() const;
  /// Eigenvalues (ascending) of L, or of its interior block.
  const Eigen::VectorXd& eigenvalues(Flavor flavor) const;

  /// P_t f. Dirichlet output is zero on Z and ignores the values of f there.
  Eigen::VectorXd apply(const Eigen::VectorXd& f, double t,
                        Flavor flavor) const;
  /// Transition matrix: row x holds p_t(x, {y}).
  Eigen::MatrixXd kernel(double t, Flavor flavor) const;

 private:
  struct Spectrum {
    std::vector<std::size_t> support;
    Eigen::VectorXd lambda;
    Eigen::MatrixXd vectors;
  };
  const Spectrum& spectrum(Flavor flavor) const;

  SpacePtr space_;
  Eigen::MatrixXd conductance_;
  double mesh_;
  Eigen::MatrixXd generator_;
  Eigen::VectorXd sqrt_w_;
  Spectrum neumann_, dirichlet_;
};

/// Uniform grid on [a, b] with the three-point second difference
/// (conductance 1/h between neighbours). The trapezoidal weights of
/// interval_space make the reflecting closure self-adjoint.
HeatSystem build_interval_system(double a, double b, std::size_t n_points);

/// Graph generator on an arbitrary space: conductance 1/d(x,y) on the
/// irreducible edges. Reduces to build_interval_system on interval grids.
HeatSystem build_graph_system(SpacePtr space);

/// Generator of the glued space: base conductance divided by k between
/// points of one sheet (or a sheet and Z), undivided between points of Z.
/// Requires g to be glued from sys.space().
HeatSystem build_glued_system(const HeatSystem& sys, const GluedSpace& g);

/// P_t f for t >= 0.
Eigen::VectorXd apply_heat(const HeatSystem& sys, const Eigen::VectorXd& f,
                           double t, Flavor flavor);

/// Measure flow: (P_t mu)(A) = sum_x mu(x) p_t(x, A). Dual to apply_heat.
DiscreteMeasure apply_measure_flow(const HeatSystem& sys,
                                   const DiscreteMeasure& mu, double t,
                                   Flavor flavor);
SignedMeasure apply_measure_flow(const HeatSystem& sys,
                                 const SignedMeasure& mu, double t,
                                 Flavor flavor);

/// Glued semigroup on the k-gluing: on sheet i, P_t(mean) + P^0_t(u_i - mean).
Eigen::VectorXd glued_semigroup_apply(const HeatSystem& base,
                                      const GluedSpace& g,
                                      const Eigen::VectorXd& u, double t);
/// The same on per-sheet functions over the base space. Throws DomainError if
/// the sheets disagree on Z.
std::vector<Eigen::VectorXd> glued_semigroup_apply(
    const HeatSystem& base, const std::vector<Eigen::VectorXd>& sheets,
    double t);

/// exp(t L^) u on a system from build_glued_system.
Eigen::VectorXd glued_direct_apply(const HeatSystem& glued,
                                   const Eigen::VectorXd& u, double t);

/// -(1/t) <v, P_t u - u>_w, t > 0.
double approx_dirichlet_form(const HeatSystem& sys, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& v, double t,
                             Flavor flavor);

struct GluedFormCheck {
  double glued = 0.0;      // E^GL_t(u, v) on the glued space
  double decomposed = 0.0;  // E_t(mean u, mean v) + (1/k) sum E^0_t(u_i, v_i)
  double residual() const;
};

GluedFormCheck glued_dirichlet_form(const HeatSystem& base, const GluedSpace& g,
                                    const Eigen::VectorXd& u,
                                    const Eigen::VectorXd& v, double t);

/// (P_t (s+ + s-)/2 + P^0_t (s+ - s-)/2, P_t (s+ + s-)/2 - P^0_t (s+ - s-)/2).
ChargedMeasure charged_flow(const ChargedMeasure& s, double t,
                            const HeatSystem& sys);

/// Gamma(g)(x) = (1/2w_x) sum_y c_xy (g(y) - g(x))^2 = (L(g^2) - 2 g Lg)/2.
Eigen::VectorXd carre_du_champ(const HeatSystem& sys, const Eigen::VectorXd& g);
/// Gamma(g, h) = (L(gh) - g Lh - h Lg)/2.
Eigen::VectorXd carre_du_champ(const HeatSystem& sys, const Eigen::VectorXd& g,
                               const Eigen::VectorXd& h);

// Experiments ---------------------------------------------------------------

struct ExperimentRow {
  double t = 0.0;
  double quantity = 0.0;
  double bound = 0.0;
  double violation = 0.0;  // max(0, quantity - bound)
  std::string anchor;
};

/// Rows (t, W^0_p(mu_t, nu_t), e^{-Kt} W^0_p(mu_0, nu_0)) with
/// mu_t = P^0_t mu_0 on the interior.
std::vector<ExperimentRow> contraction_experiment(
    const DiscreteMeasure& mu0, const DiscreteMeasure& nu0, double p,
    const std::vector<double>& times, const HeatSystem& sys, double K = 0.0);

/// Rows (t, W~_p(s_t, r_t), e^{-Kt} W~_p(s_0, r_0)) under charged_flow.
std::vector<ExperimentRow> charged_contraction_experiment(
    const ChargedMeasure& s0, const ChargedMeasure& r0, double p,
    const std::vector<double>& times, const HeatSystem& sys, double K = 0.0);

struct GradientReport {
  Eigen::VectorXd lhs;  // Gamma(P^0_t f)^{p/2}
  Eigen::VectorXd rhs;  // e^{-Kpt} P_t(Gamma(f)^{p/2})
  double max_violation = 0.0;
  double mesh = 0.0;
};

/// Pointwise gradient estimate. f must vanish on Z.
GradientReport gradient_estimate_check(const Eigen::VectorXd& f, double t,
                                       double p, double K,
                                       const HeatSystem& sys);

struct BochnerReport {
  double lhs = 0.0;  // (1/p) <L phi, G^p> - <phi G^{p-2}, Gamma(f, L^0 f)>
  double rhs = 0.0;  // K <phi, G^p>, G = Gamma(f)^{1/2}
  double residual = 0.0;
  double mesh = 0.0;
};

/// Weak Bochner inequality tested against phi >= 0; p in [1, 2].
BochnerReport bochner_check(const Eigen::VectorXd& f, const Eigen::VectorXd& phi,
                            double p, double K, const HeatSystem& sys);

/// Rows (t, d/dt W~_2^2/2 + K/2 W~_2^2 - (Ent~(tau) - Ent~(s_t)), 0) along
/// s_t = charged_flow(s0, t); the derivative is a forward difference with
/// step dt. EVI_K predicts quantity <= 0.
std::vector<ExperimentRow> evi_residual(const ChargedMeasure& s0,
                                        const ChargedMeasure& tau,
                                        const std::vector<double>& times,
                                        double K, const HeatSystem& sys,
                                        double dt = 1e-3);

}  // namespace tadist
