#pragma once

#include <vector>

#include "pmlab/solver.hpp"

namespace pmlab {

// Parameters of the coupled biomass/nutrient system
//   M_t = d2 div(D(M) grad M) - K2 M + K3 C M/(K4 + C)
//   C_t = d1 Lap C - K1 C M/(K4 + C)
// with D(M) = M^b (1-M)^{-a}, so d2 div(D grad M) = d2 Lap phi(M) for the
// biofilm integrand phi.
struct BiofilmParams {
  double d1 = 1.0;
  double d2 = 1.0;
  double K1 = 0.0;
  double K2 = 0.0;
  double K3 = 0.0;
  double K4 = 1.0;
  double a = 1.0;
  double b = 1.0;

  void validate() const {
    if (!(d1 > 0.0 && d2 > 0.0 && K4 > 0.0))
      throw DomainError("d1, d2 and K4 must be strictly positive");
    if (K1 < 0.0 || K2 < 0.0 || K3 < 0.0)
      throw DomainError("K1, K2 and K3 must be non-negative");
    if (!(a >= 1.0 && b > 0.0)) throw DomainError("need a >= 1 and b > 0");
  }
};

struct BiofilmState {
  Field M;  // biomass density in [0,1)
  Field C;  // nutrient concentration, >= 0 (bulk-scaled so C <= 1)
  double t = 0.0;
};

struct BiofilmConfig {
  SolverConfig m_solver;                    // bc and Newton settings for M
  std::array<BoundaryCondition, 4> c_bc{};  // boundary conditions for C
};

// One operator-splitting step: M advances implicitly in its degenerate
// diffusion with the Monod reaction explicit at the current C; C advances by
// an implicit linear heat step with the sink explicit at the pre-step M.
BiofilmState advance_coupled_step(const BiofilmState& s,
                                  const BiofilmParams& p,
                                  const BiofilmConfig& cfg,
                                  StepStats* m_stats = nullptr);

struct BiofilmTrajectory {
  std::vector<BiofilmState> snapshots;
  bool upper_clip_ever = false;
};

BiofilmTrajectory run_biofilm(const BiofilmState& s0, const BiofilmParams& p,
                              const BiofilmConfig& cfg, double t_end,
                              int snapshot_every = 1);

// The biofilm region Omega_M(t) = {M > tol}: occupied cells, its measure and
// the region cells that touch a non-region neighbor.
struct RegionDescriptor {
  std::vector<int> cells;
  std::vector<int> boundary_cells;
  double measure = 0.0;
};

RegionDescriptor extract_biofilm_region(const Field& M, double tol);

}  // namespace pmlab
