#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pmlab/regularity.hpp"

namespace pmlab {

// Tensorized quintic-smoothstep cutoff on a cylinder: radial bump times a
// backward-in-time ramp, identically 1 on the plateau-shrunk cylinder and 0
// on the parabolic boundary of the support. Derivative sup-norms are recorded
// as attained over the grid samples, not assumed.
struct CutoffSpec {
  Cylinder support;
  double plateau = 0.5;  // fraction p of radius/depth where zeta == 1
  bool space_only = false;
  double sup_grad = 0.0;  // sup |grad zeta|
  double sup_lap = 0.0;   // sup |Lap zeta|
  double sup_dt = 0.0;    // sup |d zeta/dt| (physical time)

  double value(const Point& x, double t, int dim) const;
  double grad_norm(const Point& x, double t, int dim) const;
  double laplacian(const Point& x, double t, int dim) const;
  // Derivative with respect to the cylinder-rescaled time tau = t R^2/depth.
  double dtau(const Point& x, double t, int dim) const;
};

CutoffSpec make_cutoff(const Cylinder& support, double plateau,
                       const Trajectory& traj, bool space_only = false);

// Left/right-hand sides of one verified integral inequality. Time integrals
// are evaluated in the cylinder's own rescaled time, so reports do not change
// under a pure relabeling of the time unit (same omega, same cylinders).
struct EstimateReport {
  std::vector<std::pair<std::string, double>> lhs_terms;
  std::vector<std::pair<std::string, double>> rhs_terms;
  double ratio = 0.0;      // gradient term with zeta outside the gradient
  double ratio_alt = 0.0;  // gradient of the product (both readings hold)
  bool vacuous = false;
  std::string note;
  std::string refinement_tag;

  double lhs_total() const {
    double s = 0.0;
    for (auto& [n, v] : lhs_terms)
      if (n != "grad_energy_product") s += v;
    return s;
  }
  double rhs_total() const {
    double s = 0.0;
    for (auto& [n, v] : rhs_terms) s += v;
    return s;
  }
};

// Interior energy estimate, lower truncation: for k >= l > 0 and
// v = (max{u,l} - k)_-,
//   sup_t ||v zeta||_{L2}^2 + c1 l^{m-1} ||grad v zeta||^2
//     <= C [ (k-l)(k+l) I(|zeta_t| chi_{u<k}) + c2 (k-l)^2 k^{m-1}
//            I(|grad zeta|^2 chi_{l<u<k}) + (k-l) l^m/m I(|Lap zeta| chi_{u<l})
//            + L l^{-m0} (k-l) I(chi_{u<k}) ].
EstimateReport verify_lower_energy(const Trajectory& traj,
                                   const Nonlinearity& nl,
                                   const StructuralConstants& sc,
                                   const ReactionTerm& rt,
                                   const CutoffSpec& cut, double k, double l);

// Interior energy estimate, upper truncation, for (u - k)_+.
EstimateReport verify_upper_energy(const Trajectory& traj,
                                   const Nonlinearity& nl,
                                   const StructuralConstants& sc,
                                   const ReactionTerm& rt,
                                   const CutoffSpec& cut, double k);

// Interior logarithmic estimate between the time slices t <= tau, with
// integer levels l > k >= 1 and a space-only cutoff.
EstimateReport verify_log_estimate(const Trajectory& traj,
                                   const Nonlinearity& nl,
                                   const StructuralConstants& sc,
                                   const ReactionTerm& rt,
                                   const CutoffSpec& cut, int k, int l,
                                   double t, double tau);

// ||w||_{L2} / (|[w != 0]|^{1/(N+2)} ||w||_{V2}) for a space-time field
// vanishing on the lateral boundary; ||.||_{V2} = sup_t ||w(t)||_{L2} +
// ||grad w||_{L2}. Throws ZeroField for w identically zero.
double v2_embedding_ratio(const Trajectory& w);

// lhs/rhs of the truncated Poincare inequality on a ball, without the
// dimensional constant:
//   (l-k) |B cap [w>l]|^{1-1/N}  vs  (R^N/|B cap [w<=k]|) int_{l>w>=k} |grad w|
double poincare_ratio(const Field& w, const Point& center, double R, double k,
                      double l);

// Extremal recursion y_{n+1} = C b^n y_n^{1+a} against the fast-geometric
// bound y_n <= theta b^{-n/a} with theta = C^{-1/a} b^{-1/a^2}.
struct FastGeometricResult {
  std::vector<double> sequence;
  std::vector<double> bounds;
  double theta = 0.0;
  bool hypothesis_met = false;  // y0 <= theta
  bool bound_holds = false;     // y_n <= bound for all n <= n_max
};

FastGeometricResult fast_geometric_bound(double C, double b, double a,
                                         double y0, int n_max);

}  // namespace pmlab
