#pragma once

#include <string>
#include <vector>

#include "quorum/analysis.hpp"

namespace quorum {

// Human-readable tables over a report: CI bounds per model (2 decimals),
// answer-distribution uniformity p-values, kappa with interpretation
// (4 decimals), and the agreement-category / majority-vote / reliability
// rates as integer percentages. Rendering is a pure function of the report.
std::string render_markdown(const Report& report);

struct CsvTable {
  std::string name;  // file stem, e.g. "ci_full_agreement"
  std::string content;
};

// One CSV per table, RFC-4180 quoting. Category and vote rates are emitted
// as two-decimal fractions alongside their raw counts.
std::vector<CsvTable> render_csv_tables(const Report& report);

std::string csv_escape(const std::string& field);

}  // namespace quorum
