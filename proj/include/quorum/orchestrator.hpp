#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "quorum/agents.hpp"
#include "quorum/dataset_io.hpp"
#include "quorum/prompts.hpp"
#include "quorum/records.hpp"
#include "quorum/topic_map.hpp"

namespace quorum {

enum class RotationMode { SingleGenerator, FullRotation };

struct Rotation {
  RotationMode mode = RotationMode::FullRotation;
  std::string generator;  // required for SingleGenerator
};

struct RunConfig {
  std::string run_label = "exp";
  std::vector<AgentConfig> models;  // exactly 4, pairwise distinct ids
  std::int64_t n_questions = 100;
  std::filesystem::path topic_map_path;
  Rotation rotation;
  std::uint64_t seed = 0;
  std::int64_t bootstrap_B = 10000;
  double confidence_level = 0.95;
  std::filesystem::path output_dir;
  int max_parallel_requests = 3;
  PromptTemplates prompts = PromptTemplates::defaults();
  std::string clock_mode = "auto";  // auto | logical | wall

  // Every violation, empty when valid.
  std::vector<std::string> violations() const;
  void validate() const;  // throws ConfigError with the full list
};

// ISO-8601 UTC timestamp source. The logical clock starts at a fixed epoch
// and advances one second per call, which keeps offline runs byte-identical;
// "auto" picks it whenever no http backend is configured.
using Clock = std::function<std::string()>;

Clock make_wall_clock();
Clock make_logical_clock();

std::string format_utc_timestamp(std::int64_t unix_seconds);

struct RunResult {
  std::filesystem::path dataset_path;
  ExperimentDataset dataset;
  std::int64_t skip_count = 0;     // generations discarded for parse failures
  std::int64_t request_count = 0;  // completions requested, including retries
};

// Executes experiments: seeded topic sampling, sequential question
// generation with regeneration on parse failure, concurrent fan-out of the
// three answer requests, and incremental single-writer persistence.
class Orchestrator {
 public:
  explicit Orchestrator(RunConfig config, HttpTransport transport = nullptr,
                        Clock clock = nullptr);
  ~Orchestrator();

  // One experiment with the given model as generator, the rest answering.
  // The dataset file <experiment_id>.jsonl appears in output_dir and is
  // readable (as partial) even if the run aborts mid-way.
  RunResult run_experiment(const std::string& generator_model);

  // One experiment per model as generator, each with an independently
  // derived seed. Completed datasets are kept if a later run fails.
  std::vector<RunResult> run_rotation();

  // Executes the configured rotation mode and writes the run manifest.
  std::vector<RunResult> run();

  std::filesystem::path manifest_path() const;

  const TopicMap& topics() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

std::string sanitize_for_filename(const std::string& name);

// Fully offline run setup: four stochastic models with per-agent seeds and a
// shared population seed derived from `seed`.
struct SyntheticRunSpec {
  std::int64_t n_questions = 100;
  std::uint64_t seed = 0;
  double accuracy = 0.9;
  double correlation = 0.0;
  bool rotation = false;
  std::string label = "sim";
  std::filesystem::path output_dir;
  std::filesystem::path topic_map_path;
  std::int64_t bootstrap_B = 10000;
  double confidence_level = 0.95;
};

RunConfig make_synthetic_run_config(const SyntheticRunSpec& spec);

}  // namespace quorum
