#include "pmlab/biofilm.hpp"

#include <algorithm>
#include <cmath>

namespace pmlab {

BiofilmState advance_coupled_step(const BiofilmState& s, const BiofilmParams& p,
                                  const BiofilmConfig& cfg,
                                  StepStats* m_stats) {
  p.validate();
  if (!(s.M.grid == s.C.grid))
    throw DomainError("M and C must share one grid");
  for (double c : s.C.values)
    if (c < 0.0) throw DomainError("C must be non-negative");

  const Grid& g = s.M.grid;
  const double dt = cfg.m_solver.dt;

  // Biomass step: scalar degenerate diffusion d2 * Lap phi(M) with the Monod
  // reaction evaluated at the current C.
  Nonlinearity nl = Nonlinearity::biofilm(p.a, p.b).scaled(p.d2);
  ReactionTerm rt = ReactionTerm::monod_biomass(p.K2, p.K3, p.K4);
  rt.bind_concentration(&s.C);
  Field m_next = advance_step(s.M, nl, rt, cfg.m_solver, s.t, m_stats);

  // Nutrient step: implicit linear heat with the sink explicit at the
  // pre-step biomass, then clipped below at zero.
  std::vector<double> rhs(s.C.values.size());
  for (size_t i = 0; i < rhs.size(); ++i) {
    const double sink =
        p.K1 * s.C.values[i] * s.M.values[i] / (p.K4 + s.C.values[i]);
    rhs[i] = s.C.values[i] - dt * sink;
  }
  std::vector<double> c_next = linear_heat_step(g, cfg.c_bc, rhs, p.d1, dt);

  BiofilmState next;
  next.M = std::move(m_next);
  next.C = Field(g);
  for (size_t i = 0; i < c_next.size(); ++i)
    next.C.values[i] = std::max(0.0, c_next[i]);
  next.t = s.t + dt;
  return next;
}

BiofilmTrajectory run_biofilm(const BiofilmState& s0, const BiofilmParams& p,
                              const BiofilmConfig& cfg, double t_end,
                              int snapshot_every) {
  BiofilmTrajectory traj;
  traj.snapshots.push_back(s0);
  BiofilmState s = s0;
  long step = 0;
  const double t_eps = 1e-12 * t_end;
  while (s.t < t_end - t_eps) {
    BiofilmConfig step_cfg = cfg;
    step_cfg.m_solver.dt = std::min(cfg.m_solver.dt, t_end - s.t);
    StepStats stats;
    s = advance_coupled_step(s, p, step_cfg, &stats);
    traj.upper_clip_ever |= stats.upper_clip_active;
    ++step;
    if (step % snapshot_every == 0 && s.t < t_end - t_eps)
      traj.snapshots.push_back(s);
  }
  traj.snapshots.push_back(s);
  return traj;
}

RegionDescriptor extract_biofilm_region(const Field& M, double tol) {
  if (tol < 0.0) throw DomainError("region tolerance must be >= 0");
  const Grid& g = M.grid;
  RegionDescriptor out;
  std::vector<char> in(static_cast<size_t>(g.cell_count()), 0);
  for (int idx = 0; idx < g.cell_count(); ++idx) {
    if (M[idx] > tol) {
      in[static_cast<size_t>(idx)] = 1;
      out.cells.push_back(idx);
    }
  }
  out.measure = static_cast<double>(out.cells.size()) * g.cell_volume();
  const int nx = g.cells[0], ny = g.cells[1];
  for (int idx : out.cells) {
    const int i = idx % nx, j = idx / nx;
    bool boundary = false;
    if (i > 0 && !in[static_cast<size_t>(g.index(i - 1, j))]) boundary = true;
    if (i < nx - 1 && !in[static_cast<size_t>(g.index(i + 1, j))]) boundary = true;
    if (g.dim == 2) {
      if (j > 0 && !in[static_cast<size_t>(g.index(i, j - 1))]) boundary = true;
      if (j < ny - 1 && !in[static_cast<size_t>(g.index(i, j + 1))]) boundary = true;
    }
    if (boundary) out.boundary_cells.push_back(idx);
  }
  return out;
}

}  // namespace pmlab
