#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "quorum/analysis.hpp"
#include "quorum/config.hpp"
#include "quorum/errors.hpp"
#include "quorum/orchestrator.hpp"
#include "quorum/render.hpp"
#include "quorum/rng.hpp"
#include "quorum/version.hpp"

namespace {

namespace fs = std::filesystem;
using namespace quorum;

int exit_code_for(ErrorClass cls) {
  switch (cls) {
    case ErrorClass::Usage: return 2;
    case ErrorClass::Config: return 3;
    case ErrorClass::Io: return 4;
    case ErrorClass::Schema: return 5;
    case ErrorClass::Parse: return 6;
    case ErrorClass::Transport: return 7;
    case ErrorClass::Validation: return 8;
  }
  return 1;
}

void print_error(const Error& e) {
  nlohmann::json payload{{"class", to_string(e.error_class())}, {"message", e.what()}};
  if (const auto* config_error = dynamic_cast<const ConfigError*>(&e))
    payload["violations"] = config_error->violations();
  std::cerr << nlohmann::json{{"error", payload}}.dump() << "\n";
}

fs::path find_default_topic_map() {
  if (const char* env = std::getenv("QUORUM_TOPIC_MAP")) return env;
  const fs::path cwd_candidate = fs::path("data") / "topics.json";
  if (fs::exists(cwd_candidate)) return cwd_candidate;
  std::error_code ec;
  const fs::path exe = fs::read_symlink("/proc/self/exe", ec);
  if (!ec) {
    for (const fs::path candidate :
         {exe.parent_path() / "data" / "topics.json",
          exe.parent_path().parent_path() / "data" / "topics.json",
          exe.parent_path().parent_path().parent_path() / "data" / "topics.json"}) {
      if (fs::exists(candidate)) return candidate;
    }
  }
  throw ConfigError(
      "no topic map found; pass --topics or set QUORUM_TOPIC_MAP (the default file ships as "
      "data/topics.json)");
}

void write_analysis_files(const Report& report, const fs::path& output_dir) {
  fs::create_directories(output_dir);
  write_report(report, output_dir / "report.json");
  std::cout << (output_dir / "report.json").string() << "\n";

  {
    std::ofstream md(output_dir / "report.md", std::ios::binary);
    if (!md) throw IoError("cannot write " + (output_dir / "report.md").string());
    md << render_markdown(report);
  }
  std::cout << (output_dir / "report.md").string() << "\n";

  for (const auto& table : render_csv_tables(report)) {
    const fs::path path = output_dir / (table.name + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << table.content;
    std::cout << path.string() << "\n";
  }
}

void print_run_summary(const std::vector<RunResult>& results) {
  for (const auto& r : results) {
    std::cout << r.dataset_path.string() << "\n";
    if (r.skip_count > 0)
      std::cerr << "note: " << r.dataset.experiment_id << " regenerated " << r.skip_count
                << " unparseable generation(s)\n";
  }
}

int cmd_run(const fs::path& config_path, const std::optional<std::string>& generator,
            const std::optional<std::uint64_t>& seed, const std::optional<fs::path>& output_dir) {
  RunConfig config = load_run_config(config_path);
  if (seed) config.seed = *seed;
  if (output_dir) config.output_dir = *output_dir;
  if (generator) config.rotation = {RotationMode::SingleGenerator, *generator};
  config.validate();
  preflight_run_config(config);

  Orchestrator orchestrator(config);
  const auto results = orchestrator.run();
  print_run_summary(results);
  std::cout << orchestrator.manifest_path().string() << "\n";
  return 0;
}

struct SimulateArgs {
  SyntheticRunSpec spec;
  std::optional<fs::path> topics;
};

int cmd_simulate(SimulateArgs args) {
  args.spec.topic_map_path = args.topics ? *args.topics : find_default_topic_map();
  if (args.spec.output_dir.empty()) args.spec.output_dir = "quorum-sim";
  RunConfig config = make_synthetic_run_config(args.spec);
  config.validate();

  Orchestrator orchestrator(config);
  const auto results = orchestrator.run();
  print_run_summary(results);
  std::cout << orchestrator.manifest_path().string() << "\n";

  std::vector<ExperimentDataset> datasets;
  for (const auto& r : results) datasets.push_back(r.dataset);
  AnalysisOptions options;
  options.seed = args.spec.seed;
  options.bootstrap_B = args.spec.bootstrap_B;
  options.confidence_level = args.spec.confidence_level;
  const Report report = analyze_datasets(datasets, options);
  write_analysis_files(report, config.output_dir);

  for (const auto& g : report.per_generator) {
    std::printf("%s: full=%.3f partial=%.3f none=%.3f majority=%.3f reliability=%.3f\n",
                g.generator_model.c_str(), g.summary.full_rate, g.summary.partial_rate,
                g.summary.none_rate, g.summary.majority_vote_rate,
                g.summary.reliability_rate);
  }
  return 0;
}

int cmd_analyze(const std::vector<fs::path>& dataset_paths, const fs::path& output_dir,
                std::uint64_t seed, std::int64_t bootstrap_B, double level, bool allow_partial) {
  AnalysisOptions options;
  options.seed = seed;
  options.bootstrap_B = bootstrap_B;
  options.confidence_level = level;
  options.allow_partial = allow_partial;

  const Report report = analyze_paths(dataset_paths, options);
  write_analysis_files(report, output_dir);
  for (const auto& g : report.per_generator) {
    if (g.dropped_incomplete > 0)
      std::cerr << "note: " << g.experiment_id << " dropped " << g.dropped_incomplete
                << " incomplete question(s)\n";
  }
  return 0;
}

int cmd_report(const fs::path& report_path, const std::string& format,
               const fs::path& output_dir) {
  const Report report = read_report(report_path);
  if (format == "markdown") {
    std::cout << render_markdown(report);
    return 0;
  }
  if (format == "csv") {
    fs::create_directories(output_dir);
    for (const auto& table : render_csv_tables(report)) {
      const fs::path path = output_dir / (table.name + ".csv");
      std::ofstream out(path, std::ios::binary);
      if (!out) throw IoError("cannot write " + path.string());
      out << table.content;
      std::cout << path.string() << "\n";
    }
    return 0;
  }
  throw Error(ErrorClass::Usage, "unknown report format '" + format +
                                     "' (expected markdown or csv)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-model MCQ consensus experiments: generate questions with one model, "
               "answer with the rest, and quantify agreement without ground truth."};
  app.set_version_flag("--version", std::string(kArtifactVersion));
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Execute experiments from a config file");
  fs::path run_config_path;
  std::optional<std::string> run_generator;
  std::optional<std::uint64_t> run_seed;
  std::optional<fs::path> run_output;
  run->add_option("--config", run_config_path, "Run configuration file")->required();
  run->add_option("--generator", run_generator,
                  "Run a single experiment with this model as generator");
  run->add_option("--seed", run_seed, "Override the config's master seed");
  run->add_option("--output-dir", run_output, "Override the config's output directory");

  // simulate
  auto* simulate = app.add_subcommand(
      "simulate", "Offline run with synthetic stochastic models, then analyze");
  SimulateArgs sim;
  simulate->add_option("-n,--n-questions", sim.spec.n_questions, "Questions per experiment")
      ->capture_default_str();
  simulate->add_option("--seed", sim.spec.seed, "Master seed")->capture_default_str();
  simulate->add_option("--accuracy", sim.spec.accuracy, "Answerer accuracy in [0,1]")
      ->capture_default_str();
  simulate->add_option("--correlation", sim.spec.correlation, "Error correlation in [0,1]")
      ->capture_default_str();
  simulate->add_flag("--rotation", sim.spec.rotation,
                     "Rotate all 4 synthetic models as generator");
  simulate->add_option("--label", sim.spec.label, "Run label used in experiment ids")
      ->capture_default_str();
  simulate->add_option("--output-dir", sim.spec.output_dir, "Output directory (default: quorum-sim)");
  std::string sim_topics;
  simulate->add_option("--topics", sim_topics, "Topic map file (default: shipped data/topics.json)");
  simulate->add_option("--bootstrap-B", sim.spec.bootstrap_B, "Bootstrap resample count")
      ->capture_default_str();
  simulate->add_option("--level", sim.spec.confidence_level, "Confidence level")
      ->capture_default_str();

  // analyze
  auto* analyze = app.add_subcommand("analyze", "Compute the report for dataset files");
  std::vector<fs::path> analyze_paths_arg;
  fs::path analyze_output = ".";
  std::uint64_t analyze_seed = 42;
  std::int64_t analyze_B = 10000;
  double analyze_level = 0.95;
  bool allow_partial = false;
  analyze->add_option("datasets", analyze_paths_arg, "Dataset .jsonl files")->required();
  analyze->add_option("--output-dir", analyze_output, "Output directory")->capture_default_str();
  analyze->add_option("--seed", analyze_seed, "Bootstrap master seed")->capture_default_str();
  analyze->add_option("--bootstrap-B", analyze_B, "Bootstrap resample count")
      ->capture_default_str();
  analyze->add_option("--level", analyze_level, "Confidence level")->capture_default_str();
  analyze->add_flag("--allow-partial", allow_partial,
                    "Drop questions lacking a full answer set instead of failing");

  // report
  auto* report_cmd = app.add_subcommand("report", "Render a report file");
  fs::path report_path;
  std::string report_format = "markdown";
  fs::path report_output = ".";
  report_cmd->add_option("report", report_path, "report.json produced by analyze")->required();
  report_cmd->add_option("--format", report_format, "markdown or csv")->capture_default_str();
  report_cmd->add_option("--output-dir", report_output, "Directory for csv output")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_config_path, run_generator, run_seed, run_output);
    if (simulate->parsed()) {
      if (!sim_topics.empty()) sim.topics = fs::path(sim_topics);
      return cmd_simulate(std::move(sim));
    }
    if (analyze->parsed())
      return cmd_analyze(analyze_paths_arg, analyze_output, analyze_seed, analyze_B,
                         analyze_level, allow_partial);
    if (report_cmd->parsed()) return cmd_report(report_path, report_format, report_output);
  } catch (const Error& e) {
    print_error(e);
    return exit_code_for(e.error_class());
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", {{"class", "internal"}, {"message", e.what()}}}}.dump()
              << "\n";
    return 1;
  }
  return 0;
}
