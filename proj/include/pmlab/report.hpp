#pragma once

#include <string>
#include <variant>
#include <vector>

#include "pmlab/biofilm.hpp"
#include "pmlab/estimates.hpp"
#include "pmlab/regularity.hpp"

namespace pmlab {

// Deterministic tabular text: a header row plus one row per record, numbers
// rendered locale-independently with 17 significant digits.
struct TextTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::variant<double, long, std::string>>> rows;
};

std::string render_table(const TextTable& table);
void export_report(const TextTable& table, const std::string& path);

std::string format_double(double v);  // 17 significant digits, locale-free

TextTable to_table(const OscillationReport& rep);
TextTable to_table(const std::vector<SchemeStep>& steps);
TextTable to_table(const DichotomyReport& rep);
TextTable to_table(const std::vector<DichotomyReport>& reps);
TextTable to_table(const HolderReport& rep);
TextTable to_table(const EstimateReport& rep);
TextTable to_table(const ValidationReport& rep);
TextTable to_table(const GrowthBoundReport& rep);
TextTable to_table(const CylinderConditionReport& rep);
TextTable to_table(const DeGiorgiConstants& dgc);

}  // namespace pmlab
