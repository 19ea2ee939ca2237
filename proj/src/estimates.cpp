#include "pmlab/estimates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace pmlab {

namespace {

// Quintic smoothstep with C2 joins.
double smooth5(double u) {
  u = std::clamp(u, 0.0, 1.0);
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}
double smooth5_d(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return 30.0 * u * u * (1.0 - u) * (1.0 - u);
}
double smooth5_dd(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return 60.0 * u * (2.0 * u - 1.0) * (u - 1.0);
}

struct RadialParts {
  double value = 0.0;
  double d1 = 0.0;  // f'(r)
  double d2 = 0.0;  // f''(r)
};

RadialParts radial_profile(double r, double R, double p) {
  RadialParts out;
  const double rho = r / R;
  if (rho >= 1.0) return out;
  if (rho <= p) {
    out.value = 1.0;
    return out;
  }
  const double w = (1.0 - rho) / (1.0 - p);
  out.value = smooth5(w);
  out.d1 = -smooth5_d(w) / ((1.0 - p) * R);
  out.d2 = smooth5_dd(w) / ((1.0 - p) * (1.0 - p) * R * R);
  return out;
}

// Time ramp in the cylinder-relative coordinate sigma = (t - t_bot)/depth.
double time_value(double sigma, double p) {
  if (sigma <= 0.0) return 0.0;
  if (sigma >= 1.0 - p) return 1.0;
  return smooth5(sigma / (1.0 - p));
}
double time_dsigma(double sigma, double p) {
  if (sigma <= 0.0 || sigma >= 1.0 - p) return 0.0;
  return smooth5_d(sigma / (1.0 - p)) / (1.0 - p);
}

double radius_from(const Point& x, const Cylinder& cyl, int dim) {
  const double dx = x[0] - cyl.center_x[0];
  const double dy = (dim == 2) ? x[1] - cyl.center_x[1] : 0.0;
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace

double CutoffSpec::value(const Point& x, double t, int dim) const {
  const double r = radius_from(x, support, dim);
  const RadialParts rp = radial_profile(r, support.radius, plateau);
  if (space_only) return rp.value;
  const double depth = support.depth();
  const double sigma = (t - (support.center_t - depth)) / depth;
  return rp.value * time_value(sigma, plateau);
}

double CutoffSpec::grad_norm(const Point& x, double t, int dim) const {
  const double r = radius_from(x, support, dim);
  const RadialParts rp = radial_profile(r, support.radius, plateau);
  double tv = 1.0;
  if (!space_only) {
    const double depth = support.depth();
    const double sigma = (t - (support.center_t - depth)) / depth;
    tv = time_value(sigma, plateau);
  }
  return std::abs(rp.d1) * tv;
}

double CutoffSpec::laplacian(const Point& x, double t, int dim) const {
  const double r = radius_from(x, support, dim);
  const RadialParts rp = radial_profile(r, support.radius, plateau);
  double tv = 1.0;
  if (!space_only) {
    const double depth = support.depth();
    const double sigma = (t - (support.center_t - depth)) / depth;
    tv = time_value(sigma, plateau);
  }
  // Lap f(r) = f'' + (N-1) f'/r for a radial profile.
  double lap = rp.d2;
  if (dim == 2 && r > 1e-300) lap += rp.d1 / r;
  return lap * tv;
}

double CutoffSpec::dtau(const Point& x, double t, int dim) const {
  if (space_only) return 0.0;
  const double r = radius_from(x, support, dim);
  const RadialParts rp = radial_profile(r, support.radius, plateau);
  const double depth = support.depth();
  const double sigma = (t - (support.center_t - depth)) / depth;
  // tau = (t - t0) R^2 / depth, so d sigma/d tau = 1/R^2.
  return rp.value * time_dsigma(sigma, plateau) /
         (support.radius * support.radius);
}

CutoffSpec make_cutoff(const Cylinder& support, double plateau,
                       const Trajectory& traj, bool space_only) {
  if (!(plateau > 0.0 && plateau < 1.0))
    throw DomainError("plateau fraction must lie in (0,1)");
  CutoffSpec cut;
  cut.support = support;
  cut.plateau = plateau;
  cut.space_only = space_only;

  const Grid& g = traj.grid();
  const double depth = support.depth();
  const double t_bot = support.center_t - depth;
  const double r2d = support.radius * support.radius / depth;
  for (const auto& snap : traj.snapshots) {
    if (!space_only && !(snap.t > t_bot && snap.t <= support.center_t))
      continue;
    for (int i = 0; i < g.cell_count(); ++i) {
      const Point p = g.center(i);
      if (radius_from(p, support, g.dim) >= support.radius) continue;
      cut.sup_grad = std::max(cut.sup_grad, cut.grad_norm(p, snap.t, g.dim));
      cut.sup_lap = std::max(cut.sup_lap,
                             std::abs(cut.laplacian(p, snap.t, g.dim)));
      cut.sup_dt = std::max(cut.sup_dt,
                            std::abs(cut.dtau(p, snap.t, g.dim)) * r2d);
    }
    if (space_only) break;
  }
  return cut;
}

namespace {

std::string grid_tag(const Trajectory& traj) {
  const Grid& g = traj.grid();
  std::ostringstream os;
  os << "cells=" << g.cells[0];
  if (g.dim == 2) os << "x" << g.cells[1];
  os << ",h=" << g.max_h() << ",snapshots=" << traj.snapshots.size();
  return os.str();
}

// Indices of snapshots inside (t_bot, t0] with midpoint weights in the
// cylinder-rescaled time (Delta t * R^2/depth), clamped to the window.
struct TimeSlice {
  size_t index;
  double t;
  double weight_tau;
};

std::vector<TimeSlice> time_slices(const Trajectory& traj,
                                   const Cylinder& cyl) {
  const double depth = cyl.depth();
  const double t_bot = cyl.center_t - depth;
  const double scale = cyl.radius * cyl.radius / depth;
  std::vector<size_t> inside;
  for (size_t j = 0; j < traj.snapshots.size(); ++j) {
    const double t = traj.snapshots[j].t;
    if (t > t_bot && t <= cyl.center_t) inside.push_back(j);
  }
  std::vector<TimeSlice> out;
  for (size_t q = 0; q < inside.size(); ++q) {
    const double t = traj.snapshots[inside[q]].t;
    const double prev =
        (q == 0) ? t_bot
                 : 0.5 * (traj.snapshots[inside[q - 1]].t + t);
    const double next =
        (q + 1 == inside.size())
            ? cyl.center_t
            : 0.5 * (t + traj.snapshots[inside[q + 1]].t);
    out.push_back({inside[q], t, (next - prev) * scale});
  }
  return out;
}

std::vector<int> cells_in_ball(const Grid& g, const Cylinder& cyl) {
  std::vector<int> out;
  for (int i = 0; i < g.cell_count(); ++i) {
    if (radius_from(g.center(i), cyl, g.dim) < cyl.radius) out.push_back(i);
  }
  return out;
}

// Squared gradient of the per-cell values v restricted to the given cell set:
// centered differences where both neighbors belong to the set, one-sided at
// the set boundary.
double grad_sq(const Grid& g, const std::vector<double>& v,
               const std::vector<char>& in_set, int idx) {
  const int nx = g.cells[0];
  const int i = idx % nx, j = idx / nx;
  double total = 0.0;
  for (int ax = 0; ax < g.dim; ++ax) {
    const double h = g.h(ax);
    int minus = -1, plus = -1;
    if (ax == 0) {
      if (i > 0) minus = g.index(i - 1, j);
      if (i < nx - 1) plus = g.index(i + 1, j);
    } else {
      if (j > 0) minus = g.index(i, j - 1);
      if (j < g.cells[1] - 1) plus = g.index(i, j + 1);
    }
    const bool has_m = minus >= 0 && in_set[static_cast<size_t>(minus)];
    const bool has_p = plus >= 0 && in_set[static_cast<size_t>(plus)];
    double d = 0.0;
    if (has_m && has_p) {
      d = (v[static_cast<size_t>(plus)] - v[static_cast<size_t>(minus)]) /
          (2.0 * h);
    } else if (has_p) {
      d = (v[static_cast<size_t>(plus)] - v[static_cast<size_t>(idx)]) / h;
    } else if (has_m) {
      d = (v[static_cast<size_t>(idx)] - v[static_cast<size_t>(minus)]) / h;
    }
    total += d * d;
  }
  return total;
}

// Forward differences per axis (backward on the last cell).
double grad_sq_onesided(const Grid& g, const std::vector<double>& v, int idx) {
  const int nx = g.cells[0];
  const int i = idx % nx, j = idx / nx;
  double total = 0.0;
  for (int ax = 0; ax < g.dim; ++ax) {
    const double h = g.h(ax);
    double d;
    if (ax == 0) {
      d = (i < nx - 1)
              ? (v[static_cast<size_t>(g.index(i + 1, j))] -
                 v[static_cast<size_t>(idx)]) / h
              : (v[static_cast<size_t>(idx)] -
                 v[static_cast<size_t>(g.index(i - 1, j))]) / h;
    } else {
      const int ny = g.cells[1];
      d = (j < ny - 1)
              ? (v[static_cast<size_t>(g.index(i, j + 1))] -
                 v[static_cast<size_t>(idx)]) / h
              : (v[static_cast<size_t>(idx)] -
                 v[static_cast<size_t>(g.index(i, j - 1))]) / h;
    }
    total += d * d;
  }
  return total;
}

constexpr double kTiny = 1e-300;

void finish_report(EstimateReport& rep) {
  const double lhs = rep.lhs_total();
  const double rhs = rep.rhs_total();
  // Alternative reading of the gradient term: grad acting on the product.
  double lhs_alt = 0.0;
  bool has_alt = false;
  for (auto& [n, v] : rep.lhs_terms) {
    if (n == "grad_energy_product") {
      lhs_alt += v;
      has_alt = true;
    } else if (n != "grad_energy") {
      lhs_alt += v;
    }
  }
  if (rhs <= kTiny) {
    rep.vacuous = lhs <= kTiny;
    rep.ratio = 0.0;
    rep.ratio_alt = 0.0;
    if (rep.vacuous && rep.note.empty()) rep.note = "vacuous";
    return;
  }
  rep.ratio = lhs / rhs;
  rep.ratio_alt = has_alt ? lhs_alt / rhs : rep.ratio;
  rep.vacuous = lhs <= kTiny;
  if (rep.vacuous && rep.note.empty()) rep.note = "vacuous";
}

// Nominal depth/R^2 ratio used to express time integrals in the cylinder's
// rescaled time: omega^{1-m} for intrinsic cylinders, theta for classical.
double nominal_depth_ratio(const Cylinder& cyl) {
  return (cyl.kind == Cylinder::Kind::Intrinsic)
             ? std::pow(cyl.omega, 1.0 - cyl.m)
             : cyl.theta;
}

}  // namespace

EstimateReport verify_lower_energy(const Trajectory& traj,
                                   const Nonlinearity& nl,
                                   const StructuralConstants& sc,
                                   const ReactionTerm& rt,
                                   const CutoffSpec& cut, double k, double l) {
  if (k < l) throw DomainError("lower-truncation estimate needs k >= l");
  if (!(l > 0.0)) throw DomainError("lower-truncation estimate needs l > 0");
  (void)nl;

  const Grid& g = traj.grid();
  const Cylinder& cyl = cut.support;
  const auto slices = time_slices(traj, cyl);
  const auto cells = cells_in_ball(g, cyl);
  if (slices.empty() || cells.empty())
    throw EmptyCylinder("cutoff support holds no samples");
  std::vector<char> in_set(static_cast<size_t>(g.cell_count()), 0);
  for (int c : cells) in_set[static_cast<size_t>(c)] = 1;

  const double vol = g.cell_volume();
  const double dr = nominal_depth_ratio(cyl);

  double sup_slice = 0.0;
  double grad_inner = 0.0, grad_product = 0.0;
  double int_zt = 0.0, int_gz = 0.0, int_lz = 0.0, int_chi = 0.0;

  std::vector<double> v(static_cast<size_t>(g.cell_count()), 0.0);
  std::vector<double> vz(static_cast<size_t>(g.cell_count()), 0.0);
  for (const auto& sl : slices) {
    const Field& u = traj.snapshots[sl.index].field;
    for (int c : cells) {
      const double trunc = std::max(u[c], l);
      v[static_cast<size_t>(c)] = std::max(k - trunc, 0.0);  // (u_(l)-k)_-
      vz[static_cast<size_t>(c)] =
          v[static_cast<size_t>(c)] * cut.value(g.center(c), sl.t, g.dim);
    }
    double slice_l2 = 0.0;
    for (int c : cells) {
      const Point p = g.center(c);
      const double z = cut.value(p, sl.t, g.dim);
      const double vv = v[static_cast<size_t>(c)];
      slice_l2 += vv * vv * z * z * vol;

      grad_inner += grad_sq(g, v, in_set, c) * z * z * vol * sl.weight_tau;
      grad_product += grad_sq(g, vz, in_set, c) * vol * sl.weight_tau;

      const double uu = u[c];
      if (uu < k) {
        int_zt += std::abs(cut.dtau(p, sl.t, g.dim)) * vol * sl.weight_tau;
        int_chi += vol * sl.weight_tau;
      }
      if (uu > l && uu < k) {
        const double gz = cut.grad_norm(p, sl.t, g.dim);
        int_gz += gz * gz * vol * sl.weight_tau;
      }
      if (uu < l)
        int_lz += std::abs(cut.laplacian(p, sl.t, g.dim)) * vol * sl.weight_tau;
    }
    sup_slice = std::max(sup_slice, slice_l2);
  }

  EstimateReport rep;
  rep.refinement_tag = grid_tag(traj);
  const double m = sc.m;
  rep.lhs_terms = {
      {"time_sup_energy", sup_slice},
      {"grad_energy", sc.c1 * std::pow(l, m - 1.0) * dr * grad_inner},
      {"grad_energy_product",
       sc.c1 * std::pow(l, m - 1.0) * dr * grad_product},
  };
  rep.rhs_terms = {
      {"zeta_t", (k - l) * (k + l) * int_zt},
      {"grad_zeta",
       sc.c2 * (k - l) * (k - l) * std::pow(k, m - 1.0) * dr * int_gz},
      {"lap_zeta", (k - l) * std::pow(l, m) / m * dr * int_lz},
      {"reaction",
       rt.bound_L() * std::pow(l, -rt.exponent_m0()) * (k - l) * dr * int_chi},
  };
  if (k == l) rep.note = "degenerate levels k = l";
  finish_report(rep);
  return rep;
}

EstimateReport verify_upper_energy(const Trajectory& traj,
                                   const Nonlinearity& nl,
                                   const StructuralConstants& sc,
                                   const ReactionTerm& rt,
                                   const CutoffSpec& cut, double k) {
  if (!(k > 0.0)) throw DomainError("upper-truncation estimate needs k > 0");
  (void)nl;

  const Grid& g = traj.grid();
  const Cylinder& cyl = cut.support;
  const auto slices = time_slices(traj, cyl);
  const auto cells = cells_in_ball(g, cyl);
  if (slices.empty() || cells.empty())
    throw EmptyCylinder("cutoff support holds no samples");
  std::vector<char> in_set(static_cast<size_t>(g.cell_count()), 0);
  for (int c : cells) in_set[static_cast<size_t>(c)] = 1;

  const auto osc = oscillation(traj, cyl);
  const double mu_plus = osc.mu_plus;
  const double vol = g.cell_volume();
  const double dr = nominal_depth_ratio(cyl);

  double sup_slice = 0.0, grad_inner = 0.0, grad_product = 0.0;
  double int_zt = 0.0, int_gz = 0.0, int_chi = 0.0;

  std::vector<double> v(static_cast<size_t>(g.cell_count()), 0.0);
  std::vector<double> vz(static_cast<size_t>(g.cell_count()), 0.0);
  for (const auto& sl : slices) {
    const Field& u = traj.snapshots[sl.index].field;
    for (int c : cells) {
      v[static_cast<size_t>(c)] = std::max(u[c] - k, 0.0);
      vz[static_cast<size_t>(c)] =
          v[static_cast<size_t>(c)] * cut.value(g.center(c), sl.t, g.dim);
    }
    double slice_l2 = 0.0;
    for (int c : cells) {
      const Point p = g.center(c);
      const double z = cut.value(p, sl.t, g.dim);
      const double vv = v[static_cast<size_t>(c)];
      slice_l2 += vv * vv * z * z * vol;
      grad_inner += grad_sq(g, v, in_set, c) * z * z * vol * sl.weight_tau;
      grad_product += grad_sq(g, vz, in_set, c) * vol * sl.weight_tau;
      if (u[c] > k) {
        int_zt += std::abs(cut.dtau(p, sl.t, g.dim)) * vol * sl.weight_tau;
        const double gz = cut.grad_norm(p, sl.t, g.dim);
        int_gz += gz * gz * vol * sl.weight_tau;
        int_chi += vol * sl.weight_tau;
      }
    }
    sup_slice = std::max(sup_slice, slice_l2);
  }

  EstimateReport rep;
  rep.refinement_tag = grid_tag(traj);
  const double m = sc.m;
  const double mk = std::max(mu_plus - k, 0.0);
  rep.lhs_terms = {
      {"time_sup_energy", sup_slice},
      {"grad_energy", sc.c1 * std::pow(k, m - 1.0) * dr * grad_inner},
      {"grad_energy_product",
       sc.c1 * std::pow(k, m - 1.0) * dr * grad_product},
  };
  rep.rhs_terms = {
      {"zeta_t", mk * mk * int_zt},
      {"grad_zeta",
       sc.c2 * mk * mk * std::pow(mu_plus, m - 1.0) * dr * int_gz},
      {"reaction",
       rt.bound_L() * std::pow(k, -rt.exponent_m0()) * mk * dr * int_chi},
  };
  if (k >= mu_plus) rep.note = "vacuous: k >= mu_plus";
  finish_report(rep);
  return rep;
}

EstimateReport verify_log_estimate(const Trajectory& traj,
                                   const Nonlinearity& nl,
                                   const StructuralConstants& sc,
                                   const ReactionTerm& rt,
                                   const CutoffSpec& cut, int k, int l,
                                   double t, double tau) {
  if (l <= k || k < 1) throw DomainError("log estimate needs l > k >= 1");
  if (t > tau) throw DomainError("log estimate needs t <= tau");
  if (!cut.space_only)
    throw DomainError("log estimate takes a space-only cutoff");
  (void)nl;

  const Grid& g = traj.grid();
  const Cylinder& cyl = cut.support;
  const auto cells = cells_in_ball(g, cyl);
  if (cells.empty()) throw EmptyCylinder("cutoff support holds no cells");

  auto nearest_snapshot = [&](double tt) -> const Trajectory::Snapshot& {
    size_t best = 0;
    double dist = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < traj.snapshots.size(); ++j) {
      const double dd = std::abs(traj.snapshots[j].t - tt);
      if (dd < dist) {
        dist = dd;
        best = j;
      }
    }
    return traj.snapshots[best];
  };
  const auto& snap_tau = nearest_snapshot(tau);
  const auto& snap_t = nearest_snapshot(t);

  const auto osc = oscillation(traj, cyl);
  const double mu_minus = osc.mu_minus;
  const double mu_plus = osc.mu_plus;
  const double omega =
      (cyl.kind == Cylinder::Kind::Intrinsic) ? cyl.omega : osc.essosc;
  const double level_l = mu_minus + omega - omega / std::pow(2.0, l);
  const double level_k = mu_minus + omega - omega / std::pow(2.0, k);

  const double vol = g.cell_volume();
  double lhs_slice = 0.0, rhs_slice = 0.0, int_gz = 0.0, ball = 0.0;
  for (int c : cells) {
    const Point p = g.center(c);
    const double z = cut.value(p, 0.0, g.dim);
    if (snap_tau.field[c] > level_l) lhs_slice += z * z * vol;
    if (snap_t.field[c] > level_k) rhs_slice += z * z * vol;
    const double gz = cut.grad_norm(p, 0.0, g.dim);
    int_gz += gz * gz * vol;
    ball += vol;
  }

  EstimateReport rep;
  rep.refinement_tag = grid_tag(traj);
  const double m = sc.m;
  const double R = cyl.radius;
  const double dl = static_cast<double>(l), dk = static_cast<double>(k);
  rep.lhs_terms = {{"slice_tau", (dl - dk - 1.0) * (dl - dk - 1.0) * lhs_slice}};
  rep.rhs_terms = {
      {"slice_t", (dl - dk) * (dl - dk) * rhs_slice},
      {"grad_zeta", sc.c2 * (dl - dk) * std::pow(mu_plus, m - 1.0) * R * R /
                        std::pow(omega, m - 1.0) * int_gz},
      {"reaction", rt.bound_L() * std::pow(0.5 * omega, -rt.exponent_m0()) *
                       std::pow(2.0, l) * R * R / std::pow(omega, m) * ball},
  };
  if (l == k + 1) rep.note = "degenerate: (l-k-1)^2 = 0";
  finish_report(rep);
  return rep;
}

double v2_embedding_ratio(const Trajectory& w) {
  const Grid& g = w.grid();
  const double vol = g.cell_volume();
  const size_t nsnap = w.snapshots.size();
  if (nsnap < 2) throw DomainError("need at least two snapshots");

  // Lateral boundary must carry zero data.
  const int nx = g.cells[0], ny = g.cells[1];
  for (const auto& snap : w.snapshots) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const bool edge =
            i == 0 || i == nx - 1 || (g.dim == 2 && (j == 0 || j == ny - 1));
        if (edge && snap.field[g.index(i, j)] != 0.0)
          throw DomainError("field must vanish on the lateral boundary");
      }
    }
  }

  std::vector<char> all(static_cast<size_t>(g.cell_count()), 1);
  double l2 = 0.0, support = 0.0, grad_l2 = 0.0, sup_slice = 0.0;
  bool any = false;
  for (size_t j = 0; j < nsnap; ++j) {
    const double prev = (j == 0) ? w.snapshots[0].t
                                 : 0.5 * (w.snapshots[j - 1].t + w.snapshots[j].t);
    const double next = (j + 1 == nsnap)
                            ? w.snapshots[nsnap - 1].t
                            : 0.5 * (w.snapshots[j].t + w.snapshots[j + 1].t);
    const double wt = next - prev;
    const Field& f = w.snapshots[j].field;
    double slice = 0.0;
    for (int c = 0; c < g.cell_count(); ++c) {
      const double v = f[c];
      if (v != 0.0) {
        any = true;
        support += vol * wt;
      }
      slice += v * v * vol;
      grad_l2 += grad_sq_onesided(g, f.values, c) * vol * wt;
    }
    l2 += slice * wt;
    sup_slice = std::max(sup_slice, slice);
  }
  if (!any) throw ZeroField("field is identically zero");

  const double v2 = std::sqrt(sup_slice) + std::sqrt(grad_l2);
  const double N = g.dim;
  return std::sqrt(l2) / (std::pow(support, 1.0 / (N + 2.0)) * v2);
}

double poincare_ratio(const Field& w, const Point& center, double R, double k,
                      double l) {
  if (!(l > k)) throw DomainError("poincare ratio needs l > k");
  const Grid& g = w.grid;
  Cylinder ball = Cylinder::classical(center, 0.0, R, 1.0);
  const auto cells = cells_in_ball(g, ball);
  if (cells.empty()) throw EmptyCylinder("ball holds no cells");
  std::vector<char> in_set(static_cast<size_t>(g.cell_count()), 0);
  for (int c : cells) in_set[static_cast<size_t>(c)] = 1;

  const double vol = g.cell_volume();
  double above_l = 0.0, below_k = 0.0, band_grad = 0.0;
  for (int c : cells) {
    const double v = w[c];
    if (v > l) above_l += vol;
    if (v <= k) below_k += vol;
    if (v >= k && v < l)
      band_grad += std::sqrt(grad_sq(g, w.values, in_set, c)) * vol;
  }
  if (below_k <= 0.0)
    throw DegenerateDenominator("[w <= k] has empty discrete measure");
  const double N = g.dim;
  const double lhs =
      (above_l > 0.0) ? (l - k) * std::pow(above_l, 1.0 - 1.0 / N) : 0.0;
  const double rhs = std::pow(R, N) / below_k * band_grad;
  if (rhs <= 0.0) return lhs <= 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

FastGeometricResult fast_geometric_bound(double C, double b, double a,
                                         double y0, int n_max) {
  if (!(C > 0.0 && b > 1.0 && a > 0.0 && a < 1.0 && y0 >= 0.0))
    throw DomainError("need C > 0, b > 1, a in (0,1), y0 >= 0");
  if (n_max < 1) throw DomainError("n_max must be >= 1");

  FastGeometricResult out;
  out.theta = std::pow(C, -1.0 / a) * std::pow(b, -1.0 / (a * a));
  out.hypothesis_met = y0 <= out.theta;
  out.bound_holds = true;
  double y = y0;
  for (int n = 0; n <= n_max; ++n) {
    out.sequence.push_back(y);
    const double bound = out.theta * std::pow(b, -static_cast<double>(n) / a);
    out.bounds.push_back(bound);
    if (y > bound * (1.0 + 1e-12)) out.bound_holds = false;
    y = C * std::pow(b, n) * std::pow(y, 1.0 + a);
  }
  return out;
}

}  // namespace pmlab
