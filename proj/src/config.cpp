#include "pmlab/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pmlab/barenblatt.hpp"
#include "pmlab/snapshot.hpp"

namespace pmlab {

namespace {

using nlohmann::json;

double require_number(const json& j, const char* section, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ValidationError(std::string(section) + "." + key +
                          " must be a number");
  return j[key].get<double>();
}

double number_or(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number())
    throw ValidationError(std::string(key) + " must be a number");
  return j[key].get<double>();
}

BoundaryCondition parse_bc(const json& j, const char* section) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "neumann") return BoundaryCondition::neumann();
    const auto colon = s.find(':');
    if (s.rfind("dirichlet", 0) == 0 && colon != std::string::npos)
      return BoundaryCondition::dirichlet(std::stod(s.substr(colon + 1)));
    throw ValidationError(std::string(section) +
                          ": boundary condition must be \"neumann\" or "
                          "\"dirichlet:<value>\"");
  }
  if (j.is_object()) {
    const std::string type = j.value("type", "");
    if (type == "neumann") return BoundaryCondition::neumann();
    if (type == "dirichlet")
      return BoundaryCondition::dirichlet(require_number(j, section, "value"));
  }
  throw ValidationError(std::string(section) + ": unrecognized boundary condition");
}

std::array<BoundaryCondition, 4> parse_bc_array(const json& j, int dim,
                                                const char* section) {
  std::array<BoundaryCondition, 4> bc{};
  if (j.is_null()) return bc;
  if (!j.is_array())
    throw ValidationError(std::string(section) + ".bc must be an array");
  const size_t want = dim == 1 ? 2 : 4;
  if (j.size() != want)
    throw ValidationError(std::string(section) + ".bc needs " +
                          std::to_string(want) + " per-side entries");
  for (size_t i = 0; i < want; ++i) bc[i] = parse_bc(j[i], section);
  return bc;
}

}  // namespace

Field build_initial_field(const nlohmann::json& spec, const Grid& g) {
  if (spec.is_null())
    throw ValidationError("initial: missing initial data spec");
  const std::string kind = spec.value("kind", "");
  if (kind == "constant") {
    const double v = require_number(spec, "initial", "value");
    if (v < 0.0 || v >= 1.0)
      throw ValidationError("initial.value must lie in [0,1)");
    return Field(g, v);
  }
  if (kind == "barenblatt") {
    const double m = require_number(spec, "initial", "m");
    const double mass = require_number(spec, "initial", "mass");
    const double t0 = require_number(spec, "initial", "t0");
    Field f = barenblatt_field(g, m, mass, t0);
    if (f.max() >= 1.0)
      throw ValidationError("initial: barenblatt profile reaches 1; "
                            "reduce mass or start later");
    return f;
  }
  if (kind == "bump") {
    const double radius = require_number(spec, "initial", "radius");
    const double height = require_number(spec, "initial", "height");
    const double floor = number_or(spec, "floor", 0.0);
    if (height + floor >= 1.0)
      throw ValidationError("initial: bump height reaches 1");
    Point c{0.0, 0.0};
    if (spec.contains("center")) {
      const auto& arr = spec["center"];
      for (size_t ax = 0; ax < arr.size() && ax < 2; ++ax)
        c[ax] = arr[ax].get<double>();
    }
    Field f(g, floor);
    for (int i = 0; i < g.cell_count(); ++i) {
      const Point p = g.center(i);
      const double dx = p[0] - c[0];
      const double dy = (g.dim == 2) ? p[1] - c[1] : 0.0;
      const double r = std::sqrt(dx * dx + dy * dy);
      if (r < radius) {
        const double s = r / radius;
        f[i] = floor + height * (1.0 - s * s) * (1.0 - s * s);
      }
    }
    return f;
  }
  if (kind == "file") {
    const std::string path = spec.value("path", "");
    if (path.empty()) throw ValidationError("initial.path missing");
    LoadedSnapshot snap = read_snapshot(path);
    if (!(snap.field.grid == g))
      throw ValidationError("initial: snapshot grid differs from config grid");
    return snap.field;
  }
  throw ValidationError("initial.kind must be constant|barenblatt|bump|file");
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
  if (!doc.is_object()) throw ParseError("config root must be an object");

  RunConfig rc;
  const std::string eq = doc.value("equation", "scalar");
  if (eq == "scalar")
    rc.equation = RunConfig::Equation::Scalar;
  else if (eq == "biofilm")
    rc.equation = RunConfig::Equation::Biofilm;
  else
    throw ValidationError("equation must be \"scalar\" or \"biofilm\"");

  // Grid.
  if (!doc.contains("grid")) throw ValidationError("grid section missing");
  {
    const json& jg = doc["grid"];
    const int dim = jg.value("dim", 1);
    const auto lo = jg.value("lo", std::vector<double>{0.0});
    const auto hi = jg.value("hi", std::vector<double>{1.0});
    const auto cells = jg.value("cells", std::vector<int>{64});
    if (dim == 1) {
      if (lo.size() < 1 || hi.size() < 1 || cells.size() < 1)
        throw ValidationError("grid: lo/hi/cells need one entry per axis");
      rc.grid = Grid::make_1d(lo[0], hi[0], cells[0]);
    } else if (dim == 2) {
      if (lo.size() < 2 || hi.size() < 2 || cells.size() < 2)
        throw ValidationError("grid: lo/hi/cells need one entry per axis");
      rc.grid = Grid::make_2d(lo[0], hi[0], cells[0], lo[1], hi[1], cells[1]);
    } else {
      throw ValidationError("grid.dim must be 1 or 2");
    }
  }

  // Nonlinearity.
  {
    const json& jn = doc.contains("nonlinearity") ? doc["nonlinearity"] : json();
    const std::string kind = jn.is_object() ? jn.value("kind", "power_law")
                                            : "power_law";
    const double cap = jn.is_object()
                           ? number_or(jn, "domain_cap",
                                       Nonlinearity::kDefaultCap)
                           : Nonlinearity::kDefaultCap;
    if (kind == "power_law") {
      const double m = jn.is_object() ? number_or(jn, "m", 2.0) : 2.0;
      rc.nonlinearity = Nonlinearity::power_law(m, cap);
      rc.nominal_m = m;
    } else if (kind == "biofilm") {
      const double a = require_number(jn, "nonlinearity", "a");
      const double b = require_number(jn, "nonlinearity", "b");
      rc.nonlinearity = Nonlinearity::biofilm(a, b, cap);
      rc.nominal_m = b + 1.0;  // phi' ~ z^b near zero
    } else if (kind == "tabulated") {
      if (!jn.contains("nodes") || !jn["nodes"].is_array())
        throw ValidationError("nonlinearity.nodes must be an array of pairs");
      std::vector<std::pair<double, double>> nodes;
      for (const auto& e : jn["nodes"])
        nodes.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
      rc.nonlinearity = Nonlinearity::tabulated(std::move(nodes));
      rc.nominal_m = number_or(jn, "m_hint", 2.0);
    } else {
      throw ValidationError("nonlinearity.kind must be power_law|biofilm|tabulated");
    }
  }

  // Reaction.
  {
    const json& jr = doc.contains("reaction") ? doc["reaction"] : json();
    const std::string kind = jr.is_object() ? jr.value("kind", "zero") : "zero";
    if (kind == "zero") {
      rc.reaction = ReactionTerm::zero();
    } else if (kind == "linear_in_u") {
      const double gval = require_number(jr, "reaction", "g");
      rc.reaction = ReactionTerm::linear_in_u(
          [gval](const Point&, double) { return gval; }, std::abs(gval));
    } else if (kind == "monod") {
      rc.reaction = ReactionTerm::monod_biomass(
          require_number(jr, "reaction", "K2"),
          require_number(jr, "reaction", "K3"),
          require_number(jr, "reaction", "K4"));
    } else if (kind == "porous_fisher") {
      rc.reaction = ReactionTerm::porous_fisher(number_or(jr, "p", 1.0),
                                                number_or(jr, "q", 1.0),
                                                number_or(jr, "c", 0.0));
    } else if (kind == "singular_power") {
      rc.reaction = ReactionTerm::singular_power(
          require_number(jr, "reaction", "coeff"),
          require_number(jr, "reaction", "m0"));
    } else {
      throw ValidationError(
          "reaction.kind must be zero|linear_in_u|monod|porous_fisher|"
          "singular_power");
    }
    if (jr.is_object() && jr.contains("bound_L"))
      rc.reaction.declare_bound(require_number(jr, "reaction", "bound_L"),
                                number_or(jr, "m0", rc.reaction.exponent_m0()));
    // The growth exponent must stay below the degeneracy exponent.
    if (!(rc.reaction.exponent_m0() < rc.nominal_m))
      throw ValidationError(
          "reaction exponent m0 must satisfy m0 in [0, m) for the paired "
          "nonlinearity");
  }

  // Solver.
  {
    const json& js = doc.contains("solver") ? doc["solver"] : json();
    if (!js.is_object()) throw ValidationError("solver section missing");
    rc.solver.dt = require_number(js, "solver", "dt");
    rc.solver.t_end = require_number(js, "solver", "t_end");
    rc.solver.newton_tol = number_or(js, "newton_tol", 1e-10);
    rc.solver.newton_max_iter =
        static_cast<int>(number_or(js, "newton_max_iter", 50));
    rc.solver.clip_delta = number_or(js, "clip_delta", 1e-9);
    rc.solver.snapshot_every =
        static_cast<int>(number_or(js, "snapshot_every", 1));
    rc.solver.bc = parse_bc_array(js.contains("bc") ? js["bc"] : json(),
                                  rc.grid.dim, "solver");
    rc.solver.validate();
    for (const auto& bc : rc.solver.bc) {
      if (bc.type == BoundaryCondition::Type::Dirichlet) {
        if (bc.value < 0.0 || bc.value >= 1.0)
          throw ValidationError("solver.bc: Dirichlet values must lie in [0,1)");
        if (bc.value >= rc.nonlinearity.domain_cap())
          throw ValidationError(
              "solver.bc: Dirichlet value reaches domain_cap of the "
              "nonlinearity");
      }
    }
  }

  // Biofilm parameters.
  if (rc.equation == RunConfig::Equation::Biofilm) {
    if (!doc.contains("biofilm"))
      throw ValidationError("biofilm section missing for a biofilm run");
    const json& jb = doc["biofilm"];
    rc.biofilm.d1 = require_number(jb, "biofilm", "d1");
    rc.biofilm.d2 = require_number(jb, "biofilm", "d2");
    rc.biofilm.K1 = number_or(jb, "K1", 0.0);
    rc.biofilm.K2 = number_or(jb, "K2", 0.0);
    rc.biofilm.K3 = number_or(jb, "K3", 0.0);
    rc.biofilm.K4 = require_number(jb, "biofilm", "K4");
    rc.biofilm.a = number_or(jb, "a", 1.0);
    rc.biofilm.b = number_or(jb, "b", 1.0);
    rc.biofilm.validate();
    rc.c_bc = parse_bc_array(jb.contains("c_bc") ? jb["c_bc"] : json(),
                             rc.grid.dim, "biofilm");
    rc.initial_c = jb.contains("initial_c") ? jb["initial_c"] : json();
  }

  rc.initial = doc.contains("initial") ? doc["initial"] : json();
  rc.diagnostics = doc.contains("diagnostics") ? doc["diagnostics"] : json();
  rc.output_dir = doc.value("output_dir", "out");
  rc.seed = doc.value("seed", static_cast<uint64_t>(1));
  return rc;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config: " + path);
  std::ostringstream buf;
  buf << is.rdbuf();
  return parse_config(buf.str());
}

}  // namespace pmlab
