#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "pmlab/reaction.hpp"
#include "pmlab/solver.hpp"

namespace pmlab {

// Space-time cylinder B_R(x0) x (t0 - depth, t0], anchored at (x0, t0) with
// time extending backward. Intrinsic scaling has depth omega^{1-m} R^2,
// classical scaling theta R^2. An optional depth_factor shortens the
// intrinsic depth (factor nu0/2 for the dichotomy's second branch).
struct Cylinder {
  enum class Kind { Intrinsic, Classical };

  Point center_x{0.0, 0.0};
  double center_t = 0.0;
  double radius = 0.0;
  Kind kind = Kind::Intrinsic;
  double omega = 1.0;   // Intrinsic
  double m = 2.0;       // Intrinsic
  double theta = 1.0;   // Classical
  double depth_factor = 1.0;

  static Cylinder intrinsic(const Point& x0, double t0, double R, double omega,
                            double m, double depth_factor = 1.0) {
    if (!(R > 0.0 && omega > 0.0 && m > 1.0))
      throw DomainError("intrinsic cylinder needs R > 0, omega > 0, m > 1");
    return {x0, t0, R, Kind::Intrinsic, omega, m, 1.0, depth_factor};
  }
  static Cylinder classical(const Point& x0, double t0, double R,
                            double theta) {
    if (!(R > 0.0 && theta > 0.0))
      throw DomainError("classical cylinder needs R > 0, theta > 0");
    return {x0, t0, R, Kind::Classical, 1.0, 2.0, theta, 1.0};
  }

  double depth() const {
    const double base = (kind == Kind::Intrinsic)
                            ? std::pow(omega, 1.0 - m) * radius * radius
                            : theta * radius * radius;
    return depth_factor * base;
  }
  Cylinder with_radius(double R) const {
    Cylinder c = *this;
    c.radius = R;
    return c;
  }
  bool contains(const Point& x, double t, int dim) const {
    const double dx = x[0] - center_x[0];
    const double dy = (dim == 2) ? x[1] - center_x[1] : 0.0;
    if (dx * dx + dy * dy >= radius * radius) return false;
    const double lo = center_t - depth();
    return t > lo && t <= center_t;
  }
};

struct OscillationReport {
  double mu_minus = 0.0;
  double mu_plus = 0.0;
  double essosc = 0.0;  // mu_plus - mu_minus
  long sample_count = 0;
};

// min/max over all grid samples whose cell center and snapshot time fall
// inside the cylinder. Throws EmptyCylinder when no sample qualifies.
OscillationReport oscillation(const Trajectory& traj, const Cylinder& cyl);

enum class LevelSense { Below, AtOrAbove };

// Fraction of in-cylinder samples with u < k (Below) or u >= k (AtOrAbove).
double level_set_fraction(const Trajectory& traj, const Cylinder& cyl,
                          double k, LevelSense sense);

// Admissibility conditions for an intrinsically scaled cylinder:
//   containment:        Q_omega(2R) inside the trajectory's domain
//   oscillation_bound:  essosc <= omega
//   inf_small:          mu_minus <= omega/4
//   oscillation_large:  omega >= R^{1/m}
struct CylinderConditionReport {
  struct Entry {
    bool pass = false;
    double margin = 0.0;  // signed slack
  };
  Entry containment, oscillation_bound, inf_small, oscillation_large;
  OscillationReport osc;
  bool all_pass() const {
    return containment.pass && oscillation_bound.pass && inf_small.pass &&
           oscillation_large.pass;
  }
};

CylinderConditionReport check_cylinder_conditions(const Trajectory& traj,
                                                  const Cylinder& cyl,
                                                  double mu);

// Picks omega for an intrinsic cylinder at (x0, t0) with radius R by the
// fixed point omega = max(R^{1/m}, essosc(Q_omega(R))). Raising omega only
// shrinks the depth, so the iteration settles in a couple of rounds with
// the oscillation bound and the omega floor holding by construction.
// Returns nullopt when the
// cylinder never captures a sample.
std::optional<Cylinder> make_intrinsic_cylinder(const Trajectory& traj,
                                                const Point& x0, double t0,
                                                double R, double m);

// Snapshot time closest to t; cylinder anchors snapped here always hold
// their top slice regardless of how thin the cylinder is.
double nearest_snapshot_time(const Trajectory& traj, double t);

// The full constant chain of the oscillation-decay machinery:
//   nu0   = C^{-(N+2)/2} 2^{-(N+2)^2}
//   eta0  = max{3/4, 1 - 2^{-n0}}
//   a     = (1/2) sqrt(nu0/2) eta0^m
//   alpha = log(eta0)/log(a)
//   R_max = (nu0^2/(4C) (n*-2)^2 / 2^{n*})^{m/(m-m0)}, capped below 1
struct DeGiorgiConstants {
  double nu0 = 0.0;
  int n0 = 2;
  double eta0 = 0.75;
  double a = 0.0;
  double alpha = 0.0;
  double R_max = 0.0;
  int n_star = 3;
  double C_struct = 1.0;
  double theta = 0.25;  // classical-cylinder aspect, <= 4^{1-m}
  double eta = 0.9;     // classical oscillation reduction factor
  double m = 2.0;
  double m0 = 0.0;
};

DeGiorgiConstants compute_degiorgi_constants(const StructuralConstants& sc,
                                             const ReactionTerm& rt, int N,
                                             double C_struct, int n0,
                                             int n_star, double theta,
                                             double eta);

// Dichotomy verdict on one admissible cylinder: branch I when the fraction of
// samples below the midlevel mu_- + omega/2 is < nu0 (conclusion: u stays
// above mu_- + omega/4 on the half cylinder), branch II otherwise
// (conclusion: u stays below mu_- + (1 - 2^{-n0}) omega on the nu0-shortened
// half cylinder). A sample violates only if it beats the value tolerance.
struct DichotomyReport {
  enum class Branch { I, II };
  Branch branch = Branch::I;
  double hypothesis_fraction = 0.0;
  double violating_fraction = 0.0;
  bool conclusion_holds = false;
  long checked_samples = 0;
  double conclusion_level = 0.0;
};

DichotomyReport degiorgi_dichotomy_check(const Trajectory& traj,
                                         const Cylinder& cyl,
                                         const DeGiorgiConstants& dgc,
                                         double mu,
                                         double value_tol = -1.0,   // < 0: 2h
                                         double fraction_tol = 0.0);

// One row of the shrinking-cylinder schedule R_{n+1} = a R_n,
// omega_{n+1} = eta0 omega_n (after the switch index: R/4 and eta omega).
struct SchemeStep {
  int n = 0;
  double R = 0.0;
  double omega = 0.0;
  double depth = 0.0;        // omega^{1-m} R^2
  double cond11_slack = 0.0; // omega^m - R, recorded pre-switch
};

std::vector<SchemeStep> generate_iterative_scheme(
    double R0, double omega0, const DeGiorgiConstants& dgc, int n_max,
    std::optional<int> switch_index = std::nullopt);

struct HolderReport {
  double alpha_hat = 0.0;
  double C_hat = 0.0;
  double fit_residual = 0.0;  // max absolute log-scale deviation
  std::vector<double> radii_used;
  std::vector<double> oscillations;
  bool degenerate = false;  // all oscillations below 1e-12 ("flat")
};

struct HolderFitMode {
  Cylinder::Kind kind = Cylinder::Kind::Intrinsic;
  double omega = 1.0;  // Intrinsic
  double m = 2.0;      // Intrinsic
  double theta = 1.0;  // Classical

  static HolderFitMode intrinsic(double omega, double m) {
    return {Cylinder::Kind::Intrinsic, omega, m, 1.0};
  }
  static HolderFitMode classical(double theta) {
    return {Cylinder::Kind::Classical, 1.0, 2.0, theta};
  }
};

// Least-squares fit of log essosc against log r over the given radii;
// alpha_hat is the slope clamped to [0,1], C_hat comes from the intercept
// normalized so essosc ~ C_hat * omega * (r/R)^alpha (intrinsic mode).
HolderReport fit_holder_exponent(const Trajectory& traj, const Point& x0,
                                 double t0, const std::vector<double>& radii,
                                 const HolderFitMode& mode);

// Space-time box for the Holder seminorm.
struct SpaceTimeBox {
  Point x_lo{0.0, 0.0};
  Point x_hi{0.0, 0.0};
  double t_lo = 0.0;
  double t_hi = 0.0;
};

// Empirical constant of the interior Holder estimate: max over sampled pairs
// of |u(p0)-u(p1)| / ((|x0-x1| + |t0-t1|^{1/2})/d(K;Gamma))^alpha, with
// d(K;Gamma) = min{dist(K;Gamma), 1} in the parabolic metric. Pair sampling
// is a deterministic stratified lattice.
double holder_seminorm(const Trajectory& traj, const SpaceTimeBox& K,
                       double alpha, long pair_budget);

// Parabolic distance of K to the trajectory's parabolic boundary.
double parabolic_distance(const Trajectory& traj, const SpaceTimeBox& K);

}  // namespace pmlab
