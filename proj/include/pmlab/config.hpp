#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "pmlab/biofilm.hpp"
#include "pmlab/reaction.hpp"
#include "pmlab/solver.hpp"

namespace pmlab {

// One validated run description: which equation, the nonlinearity/reaction,
// grid and solver settings, the initial data, and (optionally) a diagnostics
// section interpreted by the CLI. Cross-field invariants (m0 < m of the
// paired nonlinearity, domain_cap above every Dirichlet value) are enforced
// at parse time.
struct RunConfig {
  enum class Equation { Scalar, Biofilm };

  Equation equation = Equation::Scalar;
  Nonlinearity nonlinearity = Nonlinearity::power_law(2.0);
  double nominal_m = 2.0;  // degeneracy exponent implied by the kind
  ReactionTerm reaction = ReactionTerm::zero();
  Grid grid = Grid::make_1d(0.0, 1.0, 64);
  SolverConfig solver;
  BiofilmParams biofilm;
  std::array<BoundaryCondition, 4> c_bc{};

  nlohmann::json initial;    // scalar initial data spec
  nlohmann::json initial_c;  // nutrient initial data spec (biofilm runs)
  nlohmann::json diagnostics;

  std::string output_dir = "out";
  uint64_t seed = 1;
};

// Parses and validates a JSON config document. Throws ParseError for
// malformed documents (with the parser's position information) and
// ValidationError naming the violated invariant.
RunConfig parse_config(const std::string& text);

RunConfig load_config_file(const std::string& path);

// Materializes an initial-data spec on the grid. Supported kinds: constant,
// barenblatt (m, mass, t0), bump (center, radius, height, floor), file
// (snapshot path).
Field build_initial_field(const nlohmann::json& spec, const Grid& g);

}  // namespace pmlab
