#include "quorum/render.hpp"

#include <cmath>
#include <cstdio>

#include "quorum/errors.hpp"

namespace quorum {

namespace {

std::string format(const char* fmt, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), fmt, value);
  return buf;
}

std::string percent(double rate) {
  return std::to_string(static_cast<long long>(std::llround(rate * 100.0))) + "%";
}

std::string two_dec(double v) { return format("%.2f", v); }
std::string four_dec(double v) { return format("%.4f", v); }
std::string sci(double v) { return format("%.3g", v); }

void require_nonempty(const Report& report) {
  if (report.per_generator.empty())
    throw ValidationError("report contains no analyzed datasets; nothing to render");
}

}  // namespace

std::string csv_escape(const std::string& field) {
  const bool needs_quotes = field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string render_markdown(const Report& report) {
  require_nonempty(report);
  std::string md;

  md += "# Consensus analysis report\n\n";
  md += "- artifact version: " + report.artifact_version + "\n";
  md += "- emitted at: " + report.emitted_at + "\n";
  md += "- bootstrap: B=" + std::to_string(report.options.bootstrap_B) +
        ", level=" + two_dec(report.options.confidence_level) +
        ", seed=" + std::to_string(report.options.seed) +
        ", rng=" + report.rng_algorithm + "\n\n";

  md += "## Agreement categories\n\n";
  md += "| Model | Full Agreement | Partial Agreement | No Agreement |\n";
  md += "| --- | --- | --- | --- |\n";
  for (const auto& g : report.per_generator) {
    md += "| " + g.generator_model + " | " + percent(g.summary.full_rate) + " | " +
          percent(g.summary.partial_rate) + " | " + percent(g.summary.none_rate) + " |\n";
  }

  md += "\n## Majority vote and reliability\n\n";
  md += "| Model | Majority Vote | Reliability |\n";
  md += "| --- | --- | --- |\n";
  for (const auto& g : report.per_generator) {
    md += "| " + g.generator_model + " | " + percent(g.summary.majority_vote_rate) + " | " +
          percent(g.summary.reliability_rate) + " |\n";
  }

  const auto ci_table = [&md, &report](const char* title,
                                       const BootstrapCI GeneratorReport::*member) {
    md += "\n## Confidence intervals for consensus rates (";
    md += title;
    md += " indicator)\n\n";
    md += "| Model | Lower Bound | Upper Bound |\n";
    md += "| --- | --- | --- |\n";
    for (const auto& g : report.per_generator) {
      const BootstrapCI& ci = g.*member;
      md += "| " + g.generator_model + " | " + two_dec(ci.lower) + " | " + two_dec(ci.upper) +
            " |\n";
    }
  };
  ci_table("full-agreement", &GeneratorReport::ci_full_agreement);
  ci_table("reliability", &GeneratorReport::ci_reliability);

  md += "\n## Answer-distribution uniformity test (chi-square, df=3)\n\n";
  md += "| Model |";
  for (const auto& g : report.per_generator) md += " " + g.generator_model + " |";
  md += "\n|";
  for (std::size_t i = 0; i <= report.per_generator.size(); ++i) md += " --- |";
  md += "\n| p-value |";
  for (const auto& g : report.per_generator) md += " " + sci(g.chi_square.p_value) + " |";
  md += "\n";

  md += "\n## Fleiss' kappa\n\n";
  md += "| Model | Kappa Value | Interpretation |\n";
  md += "| --- | --- | --- |\n";
  for (const auto& g : report.per_generator) {
    md += "| " + g.generator_model + " | " + four_dec(g.kappa.kappa) + " | " +
          g.kappa.interpretation + (g.kappa.degenerate ? " (degenerate)" : "") + " |\n";
  }

  if (!report.comparisons_full_agreement.empty()) {
    md += "\n## Pairwise interval comparisons\n\n";
    md += "| Indicator | Model A | Model B | Relation |\n";
    md += "| --- | --- | --- | --- |\n";
    for (const auto& c : report.comparisons_full_agreement)
      md += "| full-agreement | " + c.model_a + " | " + c.model_b + " | " +
            to_string(c.relation) + " |\n";
    for (const auto& c : report.comparisons_reliability)
      md += "| reliability | " + c.model_a + " | " + c.model_b + " | " + to_string(c.relation) +
            " |\n";
  }
  return md;
}

std::vector<CsvTable> render_csv_tables(const Report& report) {
  require_nonempty(report);
  std::vector<CsvTable> tables;

  auto row = [](std::initializer_list<std::string> fields) {
    std::string line;
    for (const auto& f : fields) {
      if (!line.empty()) line += ',';
      line += csv_escape(f);
    }
    line += "\r\n";
    return line;
  };

  {
    CsvTable t{"fig1_agreement_categories", ""};
    t.content += row({"generator", "n_questions", "full_rate", "partial_rate", "none_rate",
                      "n_full", "n_partial", "n_none"});
    for (const auto& g : report.per_generator)
      t.content += row({g.generator_model, std::to_string(g.summary.n_questions),
                        two_dec(g.summary.full_rate), two_dec(g.summary.partial_rate),
                        two_dec(g.summary.none_rate), std::to_string(g.summary.n_full),
                        std::to_string(g.summary.n_partial), std::to_string(g.summary.n_none)});
    tables.push_back(std::move(t));
  }

  {
    CsvTable t{"fig2_majority_reliability", ""};
    t.content += row({"generator", "majority_vote_rate", "reliability_rate", "n_majority",
                      "n_reliable"});
    for (const auto& g : report.per_generator)
      t.content += row({g.generator_model, two_dec(g.summary.majority_vote_rate),
                        two_dec(g.summary.reliability_rate),
                        std::to_string(g.summary.n_majority),
                        std::to_string(g.summary.n_reliable)});
    tables.push_back(std::move(t));
  }

  {
    CsvTable t{"table3_confidence_intervals", ""};
    t.content += row({"Model", "Indicator", "Lower Bound", "Upper Bound", "Level"});
    for (const auto& g : report.per_generator) {
      t.content += row({g.generator_model, "full_agreement", two_dec(g.ci_full_agreement.lower),
                        two_dec(g.ci_full_agreement.upper), two_dec(g.ci_full_agreement.level)});
      t.content += row({g.generator_model, "reliability", two_dec(g.ci_reliability.lower),
                        two_dec(g.ci_reliability.upper), two_dec(g.ci_reliability.level)});
    }
    tables.push_back(std::move(t));
  }

  {
    // Paper-shaped wide layout: model columns, one p-value row.
    CsvTable t{"table4_chi_square", ""};
    std::vector<std::string> header{"Model"};
    std::vector<std::string> values{"p-value"};
    for (const auto& g : report.per_generator) {
      header.push_back(g.generator_model);
      values.push_back(sci(g.chi_square.p_value));
    }
    std::string line;
    for (const auto& f : header) {
      if (!line.empty()) line += ',';
      line += csv_escape(f);
    }
    t.content += line + "\r\n";
    line.clear();
    for (const auto& f : values) {
      if (!line.empty()) line += ',';
      line += csv_escape(f);
    }
    t.content += line + "\r\n";
    tables.push_back(std::move(t));
  }

  {
    CsvTable t{"table5_fleiss_kappa", ""};
    t.content += row({"Model", "Kappa Value", "Interpretation"});
    for (const auto& g : report.per_generator)
      t.content += row({g.generator_model, four_dec(g.kappa.kappa), g.kappa.interpretation});
    tables.push_back(std::move(t));
  }

  {
    CsvTable t{"ci_comparisons", ""};
    t.content += row({"Indicator", "Model A", "Model B", "Relation"});
    for (const auto& c : report.comparisons_full_agreement)
      t.content += row({"full_agreement", c.model_a, c.model_b, to_string(c.relation)});
    for (const auto& c : report.comparisons_reliability)
      t.content += row({"reliability", c.model_a, c.model_b, to_string(c.relation)});
    tables.push_back(std::move(t));
  }

  return tables;
}

}  // namespace quorum
