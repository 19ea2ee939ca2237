#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "pmlab/grid.hpp"
#include "pmlab/nonlinearity.hpp"
#include "pmlab/reaction.hpp"

namespace pmlab {

// Per-side boundary condition. Sides are ordered west, east, south, north;
// 1D uses the first two. Neumann means zero flux through the face, Dirichlet
// fixes the ghost-cell value of u (phi is evaluated on the ghost value).
struct BoundaryCondition {
  enum class Type { Neumann, Dirichlet };
  Type type = Type::Neumann;
  double value = 0.0;

  static BoundaryCondition neumann() { return {}; }
  static BoundaryCondition dirichlet(double v) {
    return {Type::Dirichlet, v};
  }
};

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  std::array<BoundaryCondition, 4> bc{};
  double newton_tol = 1e-10;      // residual max norm
  int newton_max_iter = 50;
  double clip_delta = 1e-9;       // iterates clipped to [0, 1 - clip_delta]
  int snapshot_every = 1;

  void validate() const {
    if (!(dt > 0.0)) throw DomainError("dt must be positive");
    if (!(t_end > 0.0)) throw DomainError("t_end must be positive");
    if (dt > t_end * (1.0 + 1e-12)) throw DomainError("dt must not exceed t_end");
    if (!(clip_delta > 0.0)) throw DomainError("clip_delta must be positive");
    if (snapshot_every < 1) throw DomainError("snapshot_every must be >= 1");
  }
};

struct StepStats {
  int newton_iterations = 0;
  double final_residual = 0.0;
  bool upper_clip_active = false;  // final iterate sat at 1 - clip_delta
  std::vector<double> residual_history;
};

// Time-stamped snapshots of one simulation, sharing a single grid.
struct Trajectory {
  struct Snapshot {
    double t;
    Field field;
  };
  std::vector<Snapshot> snapshots;
  std::vector<double> dt_history;
  bool upper_clip_ever = false;  // singularity guard must stay inactive

  const Grid& grid() const { return snapshots.front().field.grid; }
  double t_begin() const { return snapshots.front().t; }
  double t_end() const { return snapshots.back().t; }
  const Field& final_field() const { return snapshots.back().field; }

  // Builds a trajectory by sampling u(x, t) on a grid; for tests and static
  // diagnostics inputs.
  static Trajectory from_function(
      const Grid& g, const std::vector<double>& times,
      const std::function<double(const Point&, double)>& u);
};

// One backward-Euler step of u_t = Lap phi(u) + f(.,u): diffusion implicit
// via damped Newton on the cell-centered Laplacian of phi, reaction explicit
// at the old state. Throws NewtonDivergence when the iteration stalls and
// DomainError when the input leaves [0,1).
Field advance_step(const Field& u, const Nonlinearity& nl,
                   const ReactionTerm& rt, const SolverConfig& cfg, double t,
                   StepStats* stats = nullptr);

// Advances from t = 0 to cfg.t_end, storing every snapshot_every-th state
// plus the final one. A diverged step is retried once at dt/2 (two half
// steps); a second failure propagates.
Trajectory run_simulation(const Field& u0, const Nonlinearity& nl,
                          const ReactionTerm& rt, const SolverConfig& cfg);

namespace detail {
// Laplacian of the given per-cell values with bc-consistent ghost values;
// `phi_dirichlet` supplies the ghost value for Dirichlet sides (phi of the
// boundary datum for the nonlinear step, the datum itself for linear heat).
void apply_laplacian(const Grid& g, const std::array<BoundaryCondition, 4>& bc,
                     const std::vector<double>& v,
                     const std::array<double, 4>& ghost,
                     std::vector<double>& out);
// Homogeneous variant (Dirichlet ghosts = 0) for Jacobian actions.
void apply_laplacian_hom(const Grid& g,
                         const std::array<BoundaryCondition, 4>& bc,
                         const std::vector<double>& v, std::vector<double>& out);
}  // namespace detail

// Implicit step of the linear heat equation c_t = d Lap c + source (source
// explicit, already included in rhs by the caller): solves
// (I - dt d Lap) c_next = rhs. Used by the nutrient equation.
std::vector<double> linear_heat_step(const Grid& g,
                                     const std::array<BoundaryCondition, 4>& bc,
                                     const std::vector<double>& rhs,
                                     double d, double dt);

}  // namespace pmlab
