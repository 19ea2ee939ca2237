#include "pmlab/report.hpp"

#include <charconv>
#include <fstream>

namespace pmlab {

std::string format_double(double v) {
  char buf[48];
  auto res = std::to_chars(buf, buf + sizeof buf, v,
                           std::chars_format::scientific, 16);
  return std::string(buf, res.ptr);
}

std::string render_table(const TextTable& table) {
  std::string out;
  for (size_t i = 0; i < table.header.size(); ++i) {
    if (i) out += '\t';
    out += table.header[i];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      if (i) out += '\t';
      if (std::holds_alternative<double>(row[i]))
        out += format_double(std::get<double>(row[i]));
      else if (std::holds_alternative<long>(row[i]))
        out += std::to_string(std::get<long>(row[i]));
      else
        out += std::get<std::string>(row[i]);
    }
    out += '\n';
  }
  return out;
}

void export_report(const TextTable& table, const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << render_table(table);
  if (!os) throw IoError("short write: " + path);
}

TextTable to_table(const OscillationReport& rep) {
  TextTable t;
  t.header = {"mu_minus", "mu_plus", "essosc", "samples"};
  t.rows.push_back({rep.mu_minus, rep.mu_plus, rep.essosc, rep.sample_count});
  return t;
}

TextTable to_table(const std::vector<SchemeStep>& steps) {
  TextTable t;
  t.header = {"n", "R_n", "omega_n", "depth", "cond11_slack"};
  for (const auto& s : steps)
    t.rows.push_back({static_cast<long>(s.n), s.R, s.omega, s.depth,
                      s.cond11_slack});
  return t;
}

namespace {
std::vector<std::variant<double, long, std::string>> dichotomy_row(
    const DichotomyReport& rep) {
  return {std::string(rep.branch == DichotomyReport::Branch::I ? "I" : "II"),
          rep.hypothesis_fraction, rep.conclusion_level,
          rep.violating_fraction,
          std::string(rep.conclusion_holds ? "holds" : "violated"),
          rep.checked_samples};
}
}  // namespace

TextTable to_table(const DichotomyReport& rep) {
  TextTable t;
  t.header = {"branch", "hypothesis_fraction", "conclusion_level",
              "violating_fraction", "conclusion", "checked_samples"};
  t.rows.push_back(dichotomy_row(rep));
  return t;
}

TextTable to_table(const std::vector<DichotomyReport>& reps) {
  TextTable t;
  t.header = {"branch", "hypothesis_fraction", "conclusion_level",
              "violating_fraction", "conclusion", "checked_samples"};
  for (const auto& r : reps) t.rows.push_back(dichotomy_row(r));
  return t;
}

TextTable to_table(const HolderReport& rep) {
  TextTable t;
  t.header = {"radius", "essosc", "alpha_hat", "C_hat", "fit_residual",
              "degenerate"};
  for (size_t i = 0; i < rep.radii_used.size(); ++i)
    t.rows.push_back({rep.radii_used[i], rep.oscillations[i], rep.alpha_hat,
                      rep.C_hat, rep.fit_residual,
                      std::string(rep.degenerate ? "flat" : "ok")});
  return t;
}

TextTable to_table(const EstimateReport& rep) {
  TextTable t;
  t.header = {"side", "term", "value"};
  for (const auto& [name, v] : rep.lhs_terms)
    t.rows.push_back({std::string("lhs"), name, v});
  for (const auto& [name, v] : rep.rhs_terms)
    t.rows.push_back({std::string("rhs"), name, v});
  t.rows.push_back({std::string("ratio"), std::string("zeta_outside"),
                    rep.ratio});
  t.rows.push_back({std::string("ratio"), std::string("grad_of_product"),
                    rep.ratio_alt});
  t.rows.push_back({std::string("meta"), std::string("vacuous"),
                    std::string(rep.vacuous ? "yes" : "no")});
  t.rows.push_back({std::string("meta"), std::string("grid"),
                    rep.refinement_tag});
  if (!rep.note.empty())
    t.rows.push_back({std::string("meta"), std::string("note"), rep.note});
  return t;
}

TextTable to_table(const ValidationReport& rep) {
  TextTable t;
  t.header = {"check", "result", "min_margin", "detail"};
  for (const auto& c : rep.checks)
    t.rows.push_back({c.name, std::string(c.pass ? "pass" : "fail"), c.margin,
                      c.detail});
  return t;
}

TextTable to_table(const GrowthBoundReport& rep) {
  TextTable t;
  t.header = {"minimal_L", "declared_L", "m0", "result", "samples"};
  t.rows.push_back({rep.minimal_L, rep.declared_L, rep.exponent_m0,
                    std::string(rep.pass ? "pass" : "fail"),
                    static_cast<long>(rep.sample_count)});
  return t;
}

TextTable to_table(const CylinderConditionReport& rep) {
  TextTable t;
  t.header = {"condition", "result", "margin"};
  auto row = [&](const char* name, const CylinderConditionReport::Entry& e) {
    t.rows.push_back({std::string(name),
                      std::string(e.pass ? "pass" : "fail"), e.margin});
  };
  row("containment", rep.containment);
  row("oscillation_bound", rep.oscillation_bound);
  row("inf_small", rep.inf_small);
  row("oscillation_large", rep.oscillation_large);
  return t;
}

TextTable to_table(const DeGiorgiConstants& dgc) {
  TextTable t;
  t.header = {"constant", "value"};
  t.rows.push_back({std::string("nu0"), dgc.nu0});
  t.rows.push_back({std::string("n0"), static_cast<long>(dgc.n0)});
  t.rows.push_back({std::string("eta0"), dgc.eta0});
  t.rows.push_back({std::string("a"), dgc.a});
  t.rows.push_back({std::string("alpha"), dgc.alpha});
  t.rows.push_back({std::string("R_max"), dgc.R_max});
  t.rows.push_back({std::string("n_star"), static_cast<long>(dgc.n_star)});
  t.rows.push_back({std::string("C_struct"), dgc.C_struct});
  t.rows.push_back({std::string("theta"), dgc.theta});
  t.rows.push_back({std::string("eta"), dgc.eta});
  return t;
}

}  // namespace pmlab
