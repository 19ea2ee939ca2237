#pragma once

#include <functional>
#include <memory>
#include <string>

#include "pmlab/grid.hpp"
#include "pmlab/nonlinearity.hpp"

namespace pmlab {

// Reaction term f(x, t, z) with a declared growth bound:
//   |f(x,t,z)| <= bound_L * z^{-exponent_m0},  m0 in [0, m).
//
// Kinds: Zero, LinearInU (f = g(x,t) z), MonodBiomass (the biofilm coupling
// -K2 M + K3 C M / (K4 + C), with C read from a companion field at the same
// cell), PorousFisher (z^p (1-z)^q + c) and SingularPower (coeff * z^{-m0}).
class ReactionTerm {
 public:
  enum class Kind { Zero, LinearInU, MonodBiomass, PorousFisher, SingularPower };

  using SpaceTimeFn = std::function<double(const Point&, double)>;

  static ReactionTerm zero();
  static ReactionTerm linear_in_u(SpaceTimeFn g, double G);
  static ReactionTerm monod_biomass(double K2, double K3, double K4);
  static ReactionTerm porous_fisher(double p, double q, double c);
  static ReactionTerm singular_power(double coeff, double m0);

  // Override the declared growth-bound data; defaults are filled per kind.
  ReactionTerm& declare_bound(double L, double m0);

  // MonodBiomass reads the nutrient concentration from the companion field at
  // the cell containing x. The pointer must outlive evaluation.
  void bind_concentration(const Field* C) { coupled_ = C; }
  const Field* concentration() const { return coupled_; }

  // Evaluates f(x,t,z). Throws DomainError for z >= 1. For singular kinds z
  // is clamped below at the configured floor so evaluation stays total.
  double eval(const Point& x, double t, double z) const;

  Kind kind() const { return kind_; }
  double bound_L() const { return bound_L_; }
  double exponent_m0() const { return m0_; }
  double z_floor() const { return z_floor_; }

 private:
  ReactionTerm() = default;

  Kind kind_ = Kind::Zero;
  SpaceTimeFn g_;
  double G_ = 0.0;
  double K2_ = 0.0, K3_ = 0.0, K4_ = 1.0;
  double p_ = 1.0, q_ = 0.0, c_ = 0.0;
  double coeff_ = 0.0;
  double bound_L_ = 0.0;
  double m0_ = 0.0;
  double z_floor_ = 1e-12;
  const Field* coupled_ = nullptr;
};

struct GrowthBoundReport {
  double minimal_L = 0.0;     // smallest L bounding |f| z^{m0} on the sample
  double declared_L = 0.0;
  double exponent_m0 = 0.0;
  bool pass = false;          // minimal_L <= declared_L
  int sample_count = 0;
};

// Samples z geometrically in (0,1) and (x,t) on a deterministic lattice over
// the given box; reports the smallest L for which |f| <= L z^{-m0} holds.
GrowthBoundReport validate_growth_bound(const ReactionTerm& rt,
                                        const StructuralConstants& sc,
                                        int sample_count,
                                        const Point& x_lo = {0.0, 0.0},
                                        const Point& x_hi = {1.0, 1.0},
                                        double t_max = 1.0);

}  // namespace pmlab
