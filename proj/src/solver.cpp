#include "pmlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pmlab {

namespace {

double max_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Tridiagonal (Thomas) solve; diagonals may be nonsymmetric.
void solve_tridiagonal(std::vector<double>& sub, std::vector<double>& diag,
                       std::vector<double>& sup, std::vector<double>& rhs) {
  const size_t n = diag.size();
  for (size_t i = 1; i < n; ++i) {
    const double w = sub[i] / diag[i - 1];
    diag[i] -= w * sup[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

}  // namespace

namespace detail {

void apply_laplacian(const Grid& g, const std::array<BoundaryCondition, 4>& bc,
                     const std::vector<double>& v,
                     const std::array<double, 4>& ghost,
                     std::vector<double>& out) {
  const int nx = g.cells[0];
  const int ny = g.cells[1];
  const double ihx2 = 1.0 / (g.h(0) * g.h(0));
  const double ihy2 = (g.dim == 2) ? 1.0 / (g.h(1) * g.h(1)) : 0.0;
  out.assign(v.size(), 0.0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const int idx = g.index(i, j);
      const double c = v[static_cast<size_t>(idx)];
      const double w = (i > 0) ? v[static_cast<size_t>(g.index(i - 1, j))]
                      : (bc[0].type == BoundaryCondition::Type::Neumann ? c : ghost[0]);
      const double e = (i < nx - 1) ? v[static_cast<size_t>(g.index(i + 1, j))]
                      : (bc[1].type == BoundaryCondition::Type::Neumann ? c : ghost[1]);
      double acc = (w - 2.0 * c + e) * ihx2;
      if (g.dim == 2) {
        const double s = (j > 0) ? v[static_cast<size_t>(g.index(i, j - 1))]
                        : (bc[2].type == BoundaryCondition::Type::Neumann ? c : ghost[2]);
        const double nn = (j < ny - 1) ? v[static_cast<size_t>(g.index(i, j + 1))]
                        : (bc[3].type == BoundaryCondition::Type::Neumann ? c : ghost[3]);
        acc += (s - 2.0 * c + nn) * ihy2;
      }
      out[static_cast<size_t>(idx)] = acc;
    }
  }
}

void apply_laplacian_hom(const Grid& g,
                         const std::array<BoundaryCondition, 4>& bc,
                         const std::vector<double>& v,
                         std::vector<double>& out) {
  apply_laplacian(g, bc, v, {0.0, 0.0, 0.0, 0.0}, out);
}

}  // namespace detail

Trajectory Trajectory::from_function(
    const Grid& g, const std::vector<double>& times,
    const std::function<double(const Point&, double)>& u) {
  Trajectory traj;
  for (double t : times) {
    Field f(g);
    for (int i = 0; i < g.cell_count(); ++i) f[i] = u(g.center(i), t);
    traj.snapshots.push_back({t, std::move(f)});
  }
  return traj;
}

double total_mass(const Field& u) {
  double s = 0.0;
  for (double v : u.values) s += v;
  return s * u.grid.cell_volume();
}

namespace {

// Conjugate gradients on A = D^{-1} - dt*Lap_hom, which is symmetric positive
// definite. Solves A xi = rhs; the Newton increment is then delta = D^{-1} xi.
void solve_spd_cg(const Grid& g, const std::array<BoundaryCondition, 4>& bc,
                  const std::vector<double>& dinv, double dt,
                  const std::vector<double>& rhs, std::vector<double>& xi) {
  const size_t n = rhs.size();
  xi.assign(n, 0.0);
  std::vector<double> r = rhs, z(n), p(n), Ap(n), lap(n);

  // Jacobi preconditioner.
  std::vector<double> prec(n);
  const double diag_lap = 2.0 / (g.h(0) * g.h(0)) +
                          (g.dim == 2 ? 2.0 / (g.h(1) * g.h(1)) : 0.0);
  for (size_t i = 0; i < n; ++i) prec[i] = 1.0 / (dinv[i] + dt * diag_lap);

  auto apply_A = [&](const std::vector<double>& x, std::vector<double>& out) {
    detail::apply_laplacian_hom(g, bc, x, lap);
    for (size_t i = 0; i < n; ++i) out[i] = dinv[i] * x[i] - dt * lap[i];
  };

  double rz = 0.0;
  for (size_t i = 0; i < n; ++i) {
    z[i] = prec[i] * r[i];
    rz += r[i] * z[i];
  }
  p = z;
  const double rhs_norm = max_norm(rhs);
  const double tol = std::max(1e-16, 1e-12 * rhs_norm);
  const int max_iter = 20 * static_cast<int>(std::sqrt(double(n))) + 200;
  for (int it = 0; it < max_iter; ++it) {
    if (max_norm(r) <= tol) break;
    apply_A(p, Ap);
    double pAp = 0.0;
    for (size_t i = 0; i < n; ++i) pAp += p[i] * Ap[i];
    if (pAp <= 0.0) break;
    const double alpha = rz / pAp;
    for (size_t i = 0; i < n; ++i) {
      xi[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    double rz_new = 0.0;
    for (size_t i = 0; i < n; ++i) {
      z[i] = prec[i] * r[i];
      rz_new += r[i] * z[i];
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
}

}  // namespace

Field advance_step(const Field& u, const Nonlinearity& nl,
                   const ReactionTerm& rt, const SolverConfig& cfg, double t,
                   StepStats* stats) {
  const Grid& g = u.grid;
  const size_t n = u.values.size();
  const double dt = cfg.dt;
  const double cap = 1.0 - cfg.clip_delta;

  for (double v : u.values)
    if (v >= 1.0) throw DomainError("field value >= 1 entering advance_step");

  // Dirichlet ghost values carry phi of the boundary datum.
  std::array<double, 4> ghost{0.0, 0.0, 0.0, 0.0};
  for (int s = 0; s < 4; ++s)
    if (cfg.bc[static_cast<size_t>(s)].type == BoundaryCondition::Type::Dirichlet)
      ghost[static_cast<size_t>(s)] =
          nl.phi(cfg.bc[static_cast<size_t>(s)].value);

  // Explicit reaction at the old state.
  std::vector<double> reac(n, 0.0);
  if (rt.kind() != ReactionTerm::Kind::Zero) {
    for (size_t i = 0; i < n; ++i)
      reac[i] = rt.eval(g.center(static_cast<int>(i)), t, u.values[i]);
  }

  auto clip = [&](double v) { return std::clamp(v, 0.0, cap); };

  std::vector<double> w(n), phi_w(n), lap(n), resid(n);
  for (size_t i = 0; i < n; ++i) w[i] = clip(u.values[i]);

  auto residual = [&](const std::vector<double>& x, std::vector<double>& out) {
    for (size_t i = 0; i < n; ++i) phi_w[i] = nl.phi(x[i]);
    detail::apply_laplacian(g, cfg.bc, phi_w, ghost, lap);
    for (size_t i = 0; i < n; ++i)
      out[i] = x[i] - u.values[i] - dt * (lap[i] + reac[i]);
  };

  residual(w, resid);
  double rnorm = max_norm(resid);
  if (stats) {
    stats->residual_history.clear();
    stats->residual_history.push_back(rnorm);
  }

  std::vector<double> delta(n), trial(n), trial_res(n);
  int iter = 0;
  while (rnorm > cfg.newton_tol) {
    if (iter >= cfg.newton_max_iter)
      throw NewtonDivergence("Newton iteration budget exhausted", rnorm);
    ++iter;

    // Jacobian I - dt * Lap_hom * diag(phi'(w)).
    std::vector<double> dphi(n);
    for (size_t i = 0; i < n; ++i) dphi[i] = nl.phi_prime(w[i]);

    if (g.dim == 1) {
      const double ihx2 = 1.0 / (g.h(0) * g.h(0));
      std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0), rhs(n);
      for (size_t i = 0; i < n; ++i) {
        const bool left_nm = (i == 0 && cfg.bc[0].type == BoundaryCondition::Type::Neumann);
        const bool right_nm = (i == n - 1 && cfg.bc[1].type == BoundaryCondition::Type::Neumann);
        double own = 2.0;
        if (left_nm || right_nm) own = 1.0;
        diag[i] = 1.0 + dt * ihx2 * own * dphi[i];
        if (i > 0) sub[i] = -dt * ihx2 * dphi[i - 1];
        if (i + 1 < n) sup[i] = -dt * ihx2 * dphi[i + 1];
        rhs[i] = -resid[i];
      }
      solve_tridiagonal(sub, diag, sup, rhs);
      delta = rhs;
    } else {
      // Substitute xi = D * delta: (I - dt L D) delta = -F becomes
      // (D^{-1} - dt L) xi = -F, which is symmetric positive definite. The
      // floor on phi' only regularises the Jacobian; the residual is exact.
      const double floor = 1e-14;
      std::vector<double> dinv(n), rhs(n), xi;
      for (size_t i = 0; i < n; ++i) {
        dinv[i] = 1.0 / std::max(dphi[i], floor);
        rhs[i] = -resid[i];
      }
      solve_spd_cg(g, cfg.bc, dinv, dt, rhs, xi);
      delta.resize(n);
      for (size_t i = 0; i < n; ++i) delta[i] = dinv[i] * xi[i];
    }

    // Damped update: halve until the residual norm decreases.
    double s = 1.0;
    bool accepted = false;
    for (int halving = 0; halving <= 20; ++halving) {
      for (size_t i = 0; i < n; ++i) trial[i] = clip(w[i] + s * delta[i]);
      residual(trial, trial_res);
      const double tn = max_norm(trial_res);
      if (tn < rnorm) {
        w = trial;
        resid = trial_res;
        rnorm = tn;
        accepted = true;
        break;
      }
      s *= 0.5;
    }
    if (!accepted)
      throw NewtonDivergence("Newton damping failed to reduce the residual",
                             rnorm);
    if (stats) stats->residual_history.push_back(rnorm);
  }

  if (stats) {
    stats->newton_iterations = iter;
    stats->final_residual = rnorm;
    stats->upper_clip_active = false;
    for (size_t i = 0; i < n; ++i)
      if (w[i] >= cap) stats->upper_clip_active = true;
  }

  // Accept the state that satisfies the discrete equation exactly for the
  // final iterate's diffusion term; with Neumann data the discrete Laplacian
  // telescopes, so mass is conserved to rounding rather than to newton_tol.
  Field next(g);
  for (size_t i = 0; i < n; ++i) phi_w[i] = nl.phi(w[i]);
  detail::apply_laplacian(g, cfg.bc, phi_w, ghost, lap);
  for (size_t i = 0; i < n; ++i) {
    double v = u.values[i] + dt * (lap[i] + reac[i]);
    if (v < 0.0 && v > -10.0 * cfg.newton_tol) v = 0.0;
    if (v > cap) {
      v = cap;
      if (stats) stats->upper_clip_active = true;
    }
    next.values[i] = v;
  }
  return next;
}

Trajectory run_simulation(const Field& u0, const Nonlinearity& nl,
                          const ReactionTerm& rt, const SolverConfig& cfg) {
  cfg.validate();
  Trajectory traj;
  traj.snapshots.push_back({0.0, u0});

  Field u = u0;
  double t = 0.0;
  long step = 0;
  const double t_eps = 1e-12 * cfg.t_end;
  while (t < cfg.t_end - t_eps) {
    SolverConfig step_cfg = cfg;
    step_cfg.dt = std::min(cfg.dt, cfg.t_end - t);
    StepStats stats;
    Field next(u.grid);
    try {
      next = advance_step(u, nl, rt, step_cfg, t, &stats);
      traj.dt_history.push_back(step_cfg.dt);
    } catch (const NewtonDivergence&) {
      // One retry at half the step, taken twice to cover the same interval.
      SolverConfig half = step_cfg;
      half.dt = 0.5 * step_cfg.dt;
      Field mid = advance_step(u, nl, rt, half, t, &stats);
      traj.upper_clip_ever |= stats.upper_clip_active;
      next = advance_step(mid, nl, rt, half, t + half.dt, &stats);
      traj.dt_history.push_back(half.dt);
      traj.dt_history.push_back(half.dt);
    }
    traj.upper_clip_ever |= stats.upper_clip_active;
    t += step_cfg.dt;
    u = std::move(next);
    ++step;
    if (step % cfg.snapshot_every == 0 && t < cfg.t_end - t_eps)
      traj.snapshots.push_back({t, u});
  }
  traj.snapshots.push_back({t, std::move(u)});
  return traj;
}

std::vector<double> linear_heat_step(const Grid& g,
                                     const std::array<BoundaryCondition, 4>& bc,
                                     const std::vector<double>& rhs, double d,
                                     double dt) {
  const size_t n = rhs.size();
  // Dirichlet ghost contribution enters the right-hand side.
  std::array<double, 4> ghost{0.0, 0.0, 0.0, 0.0};
  for (int s = 0; s < 4; ++s)
    if (bc[static_cast<size_t>(s)].type == BoundaryCondition::Type::Dirichlet)
      ghost[static_cast<size_t>(s)] = bc[static_cast<size_t>(s)].value;
  std::vector<double> zero(n, 0.0), bvec(n);
  detail::apply_laplacian(g, bc, zero, ghost, bvec);  // pure ghost part

  if (g.dim == 1) {
    const double ihx2 = 1.0 / (g.h(0) * g.h(0));
    std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0), b(n);
    for (size_t i = 0; i < n; ++i) {
      const bool left_nm = (i == 0 && bc[0].type == BoundaryCondition::Type::Neumann);
      const bool right_nm = (i == n - 1 && bc[1].type == BoundaryCondition::Type::Neumann);
      const double own = (left_nm || right_nm) ? 1.0 : 2.0;
      diag[i] = 1.0 + dt * d * ihx2 * own;
      if (i > 0) sub[i] = -dt * d * ihx2;
      if (i + 1 < n) sup[i] = -dt * d * ihx2;
      b[i] = rhs[i] + dt * d * bvec[i];
    }
    solve_tridiagonal(sub, diag, sup, b);
    return b;
  }

  std::vector<double> dinv(n, 1.0), b(n), xi;
  for (size_t i = 0; i < n; ++i) b[i] = rhs[i] + dt * d * bvec[i];
  solve_spd_cg(g, bc, dinv, dt * d, b, xi);
  return xi;
}

}  // namespace pmlab
