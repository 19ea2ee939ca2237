#include "pmlab/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pmlab {

namespace {

// Visits every (cell, snapshot) sample inside the cylinder.
template <typename F>
long for_each_sample(const Trajectory& traj, const Cylinder& cyl, F&& f) {
  const Grid& g = traj.grid();
  const double depth = cyl.depth();
  const double t_lo = cyl.center_t - depth;
  long count = 0;
  for (const auto& snap : traj.snapshots) {
    if (!(snap.t > t_lo && snap.t <= cyl.center_t)) continue;
    // Visit only cells in the bounding box of the ball.
    const int nx = g.cells[0], ny = g.cells[1];
    const double hx = g.h(0);
    int i_lo = static_cast<int>((cyl.center_x[0] - cyl.radius - g.lo[0]) / hx) - 1;
    int i_hi = static_cast<int>((cyl.center_x[0] + cyl.radius - g.lo[0]) / hx) + 1;
    i_lo = std::clamp(i_lo, 0, nx - 1);
    i_hi = std::clamp(i_hi, 0, nx - 1);
    int j_lo = 0, j_hi = 0;
    if (g.dim == 2) {
      const double hy = g.h(1);
      j_lo = static_cast<int>((cyl.center_x[1] - cyl.radius - g.lo[1]) / hy) - 1;
      j_hi = static_cast<int>((cyl.center_x[1] + cyl.radius - g.lo[1]) / hy) + 1;
      j_lo = std::clamp(j_lo, 0, ny - 1);
      j_hi = std::clamp(j_hi, 0, ny - 1);
    }
    for (int j = j_lo; j <= j_hi; ++j) {
      for (int i = i_lo; i <= i_hi; ++i) {
        const int idx = g.index(i, j);
        const Point p = g.center(idx);
        const double dx = p[0] - cyl.center_x[0];
        const double dy = (g.dim == 2) ? p[1] - cyl.center_x[1] : 0.0;
        if (dx * dx + dy * dy >= cyl.radius * cyl.radius) continue;
        f(snap.field[idx]);
        ++count;
      }
    }
  }
  return count;
}

}  // namespace

OscillationReport oscillation(const Trajectory& traj, const Cylinder& cyl) {
  OscillationReport rep;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  rep.sample_count = for_each_sample(traj, cyl, [&](double u) {
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  });
  if (rep.sample_count == 0)
    throw EmptyCylinder("no grid sample falls inside the cylinder");
  rep.mu_minus = lo;
  rep.mu_plus = hi;
  rep.essosc = hi - lo;
  return rep;
}

double level_set_fraction(const Trajectory& traj, const Cylinder& cyl,
                          double k, LevelSense sense) {
  long below = 0;
  const long total = for_each_sample(traj, cyl, [&](double u) {
    if (u < k) ++below;
  });
  if (total == 0)
    throw EmptyCylinder("no grid sample falls inside the cylinder");
  const double frac_below = static_cast<double>(below) / total;
  return sense == LevelSense::Below ? frac_below : 1.0 - frac_below;
}

CylinderConditionReport check_cylinder_conditions(const Trajectory& traj,
                                                  const Cylinder& cyl,
                                                  double mu) {
  if (cyl.kind != Cylinder::Kind::Intrinsic)
    throw DomainError("admissibility conditions apply to intrinsic cylinders");
  (void)mu;
  CylinderConditionReport rep;
  const Grid& g = traj.grid();

  // Containment: Q_omega(2R) inside the trajectory's space-time domain.
  Cylinder doubled = cyl.with_radius(2.0 * cyl.radius);
  double space_margin = std::numeric_limits<double>::infinity();
  for (int ax = 0; ax < g.dim; ++ax) {
    space_margin = std::min(space_margin,
                            (cyl.center_x[static_cast<size_t>(ax)] -
                             doubled.radius) - g.lo[static_cast<size_t>(ax)]);
    space_margin = std::min(space_margin,
                            g.hi[static_cast<size_t>(ax)] -
                                (cyl.center_x[static_cast<size_t>(ax)] +
                                 doubled.radius));
  }
  const double time_margin_lo =
      (cyl.center_t - doubled.depth()) - traj.t_begin();
  const double time_margin_hi = traj.t_end() - cyl.center_t;
  rep.containment.margin =
      std::min({space_margin, time_margin_lo, time_margin_hi});
  rep.containment.pass = rep.containment.margin >= 0.0;

  rep.osc = oscillation(traj, cyl);

  rep.oscillation_bound.margin = cyl.omega - rep.osc.essosc;
  rep.oscillation_bound.pass = rep.oscillation_bound.margin >= 0.0;

  rep.inf_small.margin = 0.25 * cyl.omega - rep.osc.mu_minus;
  rep.inf_small.pass = rep.inf_small.margin >= 0.0;

  rep.oscillation_large.margin =
      cyl.omega - std::pow(cyl.radius, 1.0 / cyl.m);
  rep.oscillation_large.pass = rep.oscillation_large.margin >= 0.0;
  return rep;
}

double nearest_snapshot_time(const Trajectory& traj, double t) {
  double best = traj.snapshots.front().t;
  for (const auto& s : traj.snapshots)
    if (std::abs(s.t - t) < std::abs(best - t)) best = s.t;
  return best;
}

std::optional<Cylinder> make_intrinsic_cylinder(const Trajectory& traj,
                                                const Point& x0, double t0,
                                                double R, double m) {
  double omega = std::pow(R, 1.0 / m);
  for (int round = 0; round < 8; ++round) {
    Cylinder cyl = Cylinder::intrinsic(x0, t0, R, omega, m);
    OscillationReport osc;
    try {
      osc = oscillation(traj, cyl);
    } catch (const EmptyCylinder&) {
      return std::nullopt;
    }
    if (osc.essosc <= omega) return cyl;
    omega = osc.essosc;
  }
  return std::nullopt;
}

DeGiorgiConstants compute_degiorgi_constants(const StructuralConstants& sc,
                                             const ReactionTerm& rt, int N,
                                             double C_struct, int n0,
                                             int n_star, double theta,
                                             double eta) {
  if (!(C_struct > 0.0)) throw DomainError("C_struct must be positive");
  if (n0 < 2) throw DomainError("n0 must be >= 2");
  if (n_star < 3) throw DomainError("n_star must be >= 3");
  if (N != 1 && N != 2) throw DomainError("N must be 1 or 2");
  const double m = sc.m;
  const double m0 = rt.exponent_m0();
  if (!(m0 >= 0.0 && m0 < m)) throw DomainError("need m0 in [0, m)");
  if (!(theta > 0.0 && theta <= std::pow(4.0, 1.0 - m) * (1.0 + 1e-12)))
    throw DomainError("theta must lie in (0, 4^{1-m}]");
  if (!(eta > 0.0 && eta < 1.0)) throw DomainError("eta must lie in (0,1)");

  DeGiorgiConstants k;
  k.n0 = n0;
  k.n_star = n_star;
  k.C_struct = C_struct;
  k.theta = theta;
  k.eta = eta;
  k.m = m;
  k.m0 = m0;

  const double Np2 = N + 2.0;
  k.nu0 = std::pow(C_struct, -0.5 * Np2) * std::pow(2.0, -Np2 * Np2);
  if (!(k.nu0 > 0.0 && k.nu0 < 1.0))
    throw DomainError("nu0 fell outside (0,1); adjust C_struct");

  k.eta0 = std::max(0.75, 1.0 - std::pow(2.0, -n0));
  k.a = 0.5 * std::sqrt(0.5 * k.nu0) * std::pow(k.eta0, m);
  k.alpha = std::log(k.eta0) / std::log(k.a);
  if (!(k.alpha > 0.0 && k.alpha < 1.0))
    throw DomainError("alpha fell outside (0,1)");

  const double l = static_cast<double>(n_star);
  const double base =
      k.nu0 * k.nu0 / (4.0 * C_struct) * (l - 2.0) * (l - 2.0) *
      std::pow(2.0, -l);
  k.R_max = std::min(std::pow(base, m / (m - m0)), 1.0 - 1e-12);
  return k;
}

DichotomyReport degiorgi_dichotomy_check(const Trajectory& traj,
                                         const Cylinder& cyl,
                                         const DeGiorgiConstants& dgc,
                                         double mu, double value_tol,
                                         double fraction_tol) {
  auto cond = check_cylinder_conditions(traj, cyl, mu);
  if (!cond.all_pass())
    throw PreconditionError("cylinder admissibility conditions do not all hold");
  if (cyl.radius > dgc.R_max)
    throw PreconditionError("cylinder radius exceeds R_max");
  if (value_tol < 0.0) value_tol = 2.0 * traj.grid().max_h();

  DichotomyReport rep;
  const double mu_minus = cond.osc.mu_minus;
  const double omega = cyl.omega;
  const double midlevel = mu_minus + 0.5 * omega;
  rep.hypothesis_fraction =
      level_set_fraction(traj, cyl, midlevel, LevelSense::Below);

  if (rep.hypothesis_fraction < dgc.nu0) {
    rep.branch = DichotomyReport::Branch::I;
    rep.conclusion_level = mu_minus + 0.25 * omega;
    Cylinder half = cyl.with_radius(0.5 * cyl.radius);
    long viol = 0;
    rep.checked_samples = for_each_sample(traj, half, [&](double u) {
      if (u <= rep.conclusion_level - value_tol) ++viol;
    });
    if (rep.checked_samples == 0)
      throw EmptyCylinder("half cylinder holds no samples");
    rep.violating_fraction = static_cast<double>(viol) / rep.checked_samples;
  } else {
    rep.branch = DichotomyReport::Branch::II;
    rep.conclusion_level =
        mu_minus + (1.0 - std::pow(2.0, -dgc.n0)) * omega;
    Cylinder shortened = cyl.with_radius(0.5 * cyl.radius);
    shortened.depth_factor = 0.5 * dgc.nu0;
    long viol = 0;
    rep.checked_samples = for_each_sample(traj, shortened, [&](double u) {
      if (u >= rep.conclusion_level + value_tol) ++viol;
    });
    if (rep.checked_samples == 0)
      throw EmptyCylinder("shortened half cylinder holds no samples");
    rep.violating_fraction = static_cast<double>(viol) / rep.checked_samples;
  }
  rep.conclusion_holds = rep.violating_fraction <= fraction_tol;
  return rep;
}

std::vector<SchemeStep> generate_iterative_scheme(
    double R0, double omega0, const DeGiorgiConstants& dgc, int n_max,
    std::optional<int> switch_index) {
  if (!(R0 > 0.0 && R0 <= dgc.R_max))
    throw PreconditionError("need 0 < R0 <= R_max");
  if (!(omega0 >= std::pow(R0, 1.0 / dgc.m)))
    throw PreconditionError("need omega0 >= R0^{1/m}");
  if (n_max < 0) throw PreconditionError("n_max must be >= 0");

  std::vector<SchemeStep> steps;
  double R = R0, omega = omega0;
  for (int n = 0; n <= n_max; ++n) {
    SchemeStep s;
    s.n = n;
    s.R = R;
    s.omega = omega;
    s.depth = std::pow(omega, 1.0 - dgc.m) * R * R;
    s.cond11_slack = std::pow(omega, dgc.m) - R;
    const bool pre_switch = !switch_index || n < *switch_index;
    if (pre_switch && s.cond11_slack < -1e-12 * std::max(1.0, R))
      throw PreconditionError(
          "the oscillation floor omega^m >= R failed to propagate at step " +
          std::to_string(n));
    steps.push_back(s);
    if (pre_switch) {
      R *= dgc.a;
      omega *= dgc.eta0;
    } else {
      R *= 0.25;
      omega *= dgc.eta;
    }
  }
  return steps;
}

HolderReport fit_holder_exponent(const Trajectory& traj, const Point& x0,
                                 double t0, const std::vector<double>& radii,
                                 const HolderFitMode& mode) {
  if (radii.size() < 4)
    throw PreconditionError("holder fit needs at least 4 radii");
  HolderReport rep;
  for (double r : radii) {
    Cylinder cyl = (mode.kind == Cylinder::Kind::Intrinsic)
                       ? Cylinder::intrinsic(x0, t0, r, mode.omega, mode.m)
                       : Cylinder::classical(x0, t0, r, mode.theta);
    auto osc = oscillation(traj, cyl);  // throws EmptyCylinder if unres.
    rep.radii_used.push_back(r);
    rep.oscillations.push_back(osc.essosc);
  }

  bool any_live = false;
  for (double o : rep.oscillations)
    if (o > 1e-12) any_live = true;
  if (!any_live) {
    rep.degenerate = true;  // "flat"
    rep.alpha_hat = 0.0;
    rep.C_hat = 0.0;
    rep.fit_residual = 0.0;
    return rep;
  }

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  std::vector<double> lx, ly;
  for (size_t i = 0; i < rep.radii_used.size(); ++i) {
    if (rep.oscillations[i] <= 1e-12) continue;
    const double x = std::log(rep.radii_used[i]);
    const double y = std::log(rep.oscillations[i]);
    lx.push_back(x);
    ly.push_back(y);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) {
    rep.degenerate = true;
    return rep;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double intercept = (sy - slope * sx) / n;
  for (int i = 0; i < n; ++i)
    rep.fit_residual = std::max(
        rep.fit_residual,
        std::abs(ly[static_cast<size_t>(i)] -
                 (intercept + slope * lx[static_cast<size_t>(i)])));
  rep.alpha_hat = std::clamp(slope, 0.0, 1.0);
  // essosc ~ C omega (r/R)^alpha with R the largest radius used.
  const double Rmaxr = *std::max_element(rep.radii_used.begin(),
                                         rep.radii_used.end());
  const double scale =
      (mode.kind == Cylinder::Kind::Intrinsic) ? mode.omega : 1.0;
  rep.C_hat = std::exp(intercept + slope * std::log(Rmaxr)) / scale;
  return rep;
}

double parabolic_distance(const Trajectory& traj, const SpaceTimeBox& K) {
  const Grid& g = traj.grid();
  double margin = std::numeric_limits<double>::infinity();
  for (int ax = 0; ax < g.dim; ++ax) {
    margin = std::min(margin, K.x_lo[static_cast<size_t>(ax)] -
                                  g.lo[static_cast<size_t>(ax)]);
    margin = std::min(margin, g.hi[static_cast<size_t>(ax)] -
                                  K.x_hi[static_cast<size_t>(ax)]);
  }
  const double dt0 = K.t_lo - traj.t_begin();
  if (dt0 < 0.0 || margin < 0.0) return 0.0;
  return std::min(margin, std::sqrt(dt0));
}

double holder_seminorm(const Trajectory& traj, const SpaceTimeBox& K,
                       double alpha, long pair_budget) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw DomainError("alpha must lie in (0,1]");
  if (K.t_hi > traj.t_end() + 1e-12)
    throw DomainError("K extends beyond the trajectory");
  const double dist = parabolic_distance(traj, K);
  if (dist <= 0.0)
    throw DomainError("K touches the parabolic boundary (d = 0)");
  const double d = std::min(dist, 1.0);

  // Collect in-box samples as (x, t, u).
  struct Sample {
    Point x;
    double t;
    double u;
  };
  const Grid& g = traj.grid();
  std::vector<Sample> samples;
  for (const auto& snap : traj.snapshots) {
    if (snap.t < K.t_lo - 1e-14 || snap.t > K.t_hi + 1e-14) continue;
    for (int i = 0; i < g.cell_count(); ++i) {
      const Point p = g.center(i);
      bool inside = p[0] >= K.x_lo[0] && p[0] <= K.x_hi[0];
      if (g.dim == 2)
        inside = inside && p[1] >= K.x_lo[1] && p[1] <= K.x_hi[1];
      if (inside) samples.push_back({p, snap.t, snap.field[i]});
    }
  }
  if (samples.size() < 2)
    throw DomainError("K holds fewer than two samples");

  // Deterministic stratified anchors: an even stride so all of K is covered,
  // then all anchor pairs up to the budget.
  const long want = std::max<long>(
      2, static_cast<long>(std::sqrt(2.0 * static_cast<double>(pair_budget))));
  const long stride =
      std::max<long>(1, static_cast<long>(samples.size()) / want);
  std::vector<const Sample*> anchors;
  for (size_t i = 0; i < samples.size(); i += static_cast<size_t>(stride))
    anchors.push_back(&samples[i]);

  double best = 0.0;
  for (size_t i = 0; i < anchors.size(); ++i) {
    for (size_t j = i + 1; j < anchors.size(); ++j) {
      const auto& p0 = *anchors[i];
      const auto& p1 = *anchors[j];
      const double dx0 = p0.x[0] - p1.x[0];
      const double dx1 = (g.dim == 2) ? p0.x[1] - p1.x[1] : 0.0;
      const double dxn = std::sqrt(dx0 * dx0 + dx1 * dx1);
      const double dpar = dxn + std::sqrt(std::abs(p0.t - p1.t));
      if (dpar <= 0.0) continue;
      const double ratio =
          std::abs(p0.u - p1.u) / std::pow(dpar / d, alpha);
      best = std::max(best, ratio);
    }
  }
  return best;
}

}  // namespace pmlab
