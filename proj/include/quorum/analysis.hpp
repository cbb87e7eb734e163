#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "quorum/consensus.hpp"
#include "quorum/records.hpp"
#include "quorum/stats.hpp"

namespace quorum {

struct AnalysisOptions {
  std::uint64_t seed = 42;
  std::int64_t bootstrap_B = 10000;
  double confidence_level = 0.95;
  bool allow_partial = false;  // drop incomplete questions instead of failing
};

struct GeneratorReport {
  std::string experiment_id;
  std::string generator_model;
  std::int64_t dropped_incomplete = 0;
  ExperimentSummary summary;
  ChiSquareResult chi_square;
  KappaResult kappa;
  BootstrapCI ci_full_agreement;
  BootstrapCI ci_reliability;
};

struct CiComparison {
  std::string model_a;
  std::string model_b;
  CiRelation relation = CiRelation::Overlapping;
};

struct Report {
  std::string artifact_version;
  std::string rng_algorithm;
  std::string emitted_at;
  AnalysisOptions options;
  std::vector<GeneratorReport> per_generator;
  std::vector<CiComparison> comparisons_full_agreement;
  std::vector<CiComparison> comparisons_reliability;
};

// Per-dataset summary, uniformity chi-square over the pooled answer choices,
// Fleiss' kappa over the per-question tallies, and seeded bootstrap CIs for
// both the full-agreement and the reliability indicator. Bootstrap seeds
// derive from (options.seed, generator model, indicator), so results do not
// depend on dataset order. emitted_at is the latest record timestamp across
// the inputs, which keeps reports reproducible from the same data.
Report analyze_datasets(const std::vector<ExperimentDataset>& datasets,
                        const AnalysisOptions& options);

Report analyze_paths(const std::vector<std::filesystem::path>& paths,
                     const AnalysisOptions& options);

nlohmann::json report_to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

void write_report(const Report& report, const std::filesystem::path& path);
Report read_report(const std::filesystem::path& path);

}  // namespace quorum
