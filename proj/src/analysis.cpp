#include "quorum/analysis.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_map>

#include "quorum/dataset_io.hpp"
#include "quorum/errors.hpp"
#include "quorum/rng.hpp"
#include "quorum/version.hpp"

namespace quorum {

namespace {

using nlohmann::json;

// Drops questions without a full answer set; returns how many were removed.
std::int64_t filter_incomplete(ExperimentDataset& dataset) {
  std::unordered_map<std::string, int> counts;
  for (const auto& a : dataset.answers) counts[a.question_id]++;
  const int expected = static_cast<int>(dataset.answerer_models.size());

  std::vector<QuestionRecord> kept;
  std::int64_t dropped = 0;
  for (auto& q : dataset.questions) {
    auto it = counts.find(q.question_id);
    if (it != counts.end() && it->second == expected) {
      kept.push_back(std::move(q));
    } else {
      ++dropped;
    }
  }
  if (dropped > 0) {
    std::vector<AnswerRecord> kept_answers;
    for (auto& a : dataset.answers) {
      for (const auto& q : kept)
        if (q.question_id == a.question_id) {
          kept_answers.push_back(std::move(a));
          break;
        }
    }
    dataset.questions = std::move(kept);
    dataset.answers = std::move(kept_answers);
  }
  return dropped;
}

json ci_to_json(const BootstrapCI& ci, const char* indicator) {
  return json{{"lower", ci.lower},
              {"upper", ci.upper},
              {"level", ci.level},
              {"n_resamples", ci.n_resamples},
              {"seed", ci.seed},
              {"point_estimate", ci.point_estimate},
              {"indicator", indicator}};
}

BootstrapCI ci_from_json(const json& j) {
  BootstrapCI ci;
  ci.lower = j.at("lower").get<double>();
  ci.upper = j.at("upper").get<double>();
  ci.level = j.at("level").get<double>();
  ci.n_resamples = j.at("n_resamples").get<std::int64_t>();
  ci.seed = j.at("seed").get<std::uint64_t>();
  ci.point_estimate = j.at("point_estimate").get<double>();
  return ci;
}

json comparisons_to_json(const std::vector<CiComparison>& comparisons) {
  json out = json::array();
  for (const auto& c : comparisons)
    out.push_back({{"model_a", c.model_a},
                   {"model_b", c.model_b},
                   {"relation", to_string(c.relation)}});
  return out;
}

std::vector<CiComparison> comparisons_from_json(const json& j) {
  std::vector<CiComparison> out;
  for (const auto& item : j) {
    CiComparison c;
    c.model_a = item.at("model_a").get<std::string>();
    c.model_b = item.at("model_b").get<std::string>();
    c.relation = item.at("relation").get<std::string>() == "Disjoint" ? CiRelation::Disjoint
                                                                      : CiRelation::Overlapping;
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

Report analyze_datasets(const std::vector<ExperimentDataset>& input_datasets,
                        const AnalysisOptions& options) {
  if (input_datasets.empty()) throw ValidationError("no datasets to analyze");

  Report report;
  report.artifact_version = kArtifactVersion;
  report.rng_algorithm = CounterRng::kAlgorithmName;
  report.options = options;

  std::string latest_timestamp;

  for (const ExperimentDataset& input : input_datasets) {
    ExperimentDataset dataset = input;
    dataset.validate();

    GeneratorReport entry;
    entry.experiment_id = dataset.experiment_id;
    entry.generator_model = dataset.generator_model;

    if (!dataset.is_complete()) {
      if (!options.allow_partial)
        throw ValidationError("dataset '" + dataset.experiment_id +
                              "' is incomplete; rerun or pass allow_partial to drop "
                              "unfinished questions");
      entry.dropped_incomplete = filter_incomplete(dataset);
    }
    if (dataset.questions.empty())
      throw ValidationError("dataset '" + dataset.experiment_id +
                            "' has no complete questions to analyze");

    for (const auto& q : dataset.questions)
      latest_timestamp = std::max(latest_timestamp, q.created_at);
    for (const auto& a : dataset.answers)
      latest_timestamp = std::max(latest_timestamp, a.created_at);

    entry.summary = summarize_experiment(dataset);

    std::array<std::int64_t, 4> observed{};
    for (const auto& a : dataset.answers) observed[index_of(a.selected)]++;
    entry.chi_square = chi_square_test(
        observed, entry.summary.n_questions,
        static_cast<int>(dataset.answerer_models.size()));

    std::unordered_map<std::string, std::vector<AnswerRecord>> by_question;
    for (const auto& a : dataset.answers) by_question[a.question_id].push_back(a);

    std::vector<std::array<int, 4>> tallies;
    std::vector<double> full_series;
    std::vector<double> reliability_series;
    tallies.reserve(dataset.questions.size());
    for (const auto& q : dataset.questions) {
      const auto result = consensus_for_question(q, by_question.at(q.question_id));
      tallies.push_back(result.tally);
      full_series.push_back(result.category == AgreementCategory::FullAgreement ? 1.0 : 0.0);
      reliability_series.push_back(static_cast<double>(result.reliability));
    }

    entry.kappa = fleiss_kappa(tallies);

    const std::uint64_t dataset_seed = derive_seed(options.seed, dataset.experiment_id);
    entry.ci_full_agreement =
        bootstrap_ci(full_series, options.confidence_level, options.bootstrap_B,
                     derive_seed(dataset_seed, "full_agreement"));
    entry.ci_reliability =
        bootstrap_ci(reliability_series, options.confidence_level, options.bootstrap_B,
                     derive_seed(dataset_seed, "reliability"));

    report.per_generator.push_back(std::move(entry));
  }

  for (std::size_t i = 0; i < report.per_generator.size(); ++i) {
    for (std::size_t j = i + 1; j < report.per_generator.size(); ++j) {
      const auto& a = report.per_generator[i];
      const auto& b = report.per_generator[j];
      report.comparisons_full_agreement.push_back(
          {a.generator_model, b.generator_model,
           compare_cis(a.ci_full_agreement, b.ci_full_agreement)});
      report.comparisons_reliability.push_back(
          {a.generator_model, b.generator_model,
           compare_cis(a.ci_reliability, b.ci_reliability)});
    }
  }

  // Derived from the data, not the wall clock, so rebuilding a report from
  // the same datasets yields identical bytes.
  report.emitted_at = latest_timestamp.empty() ? "1970-01-01T00:00:00Z" : latest_timestamp;
  return report;
}

Report analyze_paths(const std::vector<std::filesystem::path>& paths,
                     const AnalysisOptions& options) {
  std::vector<ExperimentDataset> datasets;
  datasets.reserve(paths.size());
  for (const auto& path : paths) datasets.push_back(read_dataset(path));
  return analyze_datasets(datasets, options);
}

json report_to_json(const Report& report) {
  json per_generator = json::array();
  for (const auto& g : report.per_generator) {
    json observed = json::object();
    for (AnswerOption o : kAllOptions)
      observed[to_string(o)] = g.chi_square.observed[index_of(o)];
    per_generator.push_back(
        {{"experiment_id", g.experiment_id},
         {"generator_model", g.generator_model},
         {"dropped_incomplete", g.dropped_incomplete},
         {"summary",
          {{"n_questions", g.summary.n_questions},
           {"n_full", g.summary.n_full},
           {"n_partial", g.summary.n_partial},
           {"n_none", g.summary.n_none},
           {"n_majority", g.summary.n_majority},
           {"n_reliable", g.summary.n_reliable},
           {"full_rate", g.summary.full_rate},
           {"partial_rate", g.summary.partial_rate},
           {"none_rate", g.summary.none_rate},
           {"majority_vote_rate", g.summary.majority_vote_rate},
           {"reliability_rate", g.summary.reliability_rate}}},
         {"chi_square",
          {{"statistic", g.chi_square.statistic},
           {"df", g.chi_square.df},
           {"p_value", g.chi_square.p_value},
           {"observed", observed},
           {"expected", g.chi_square.expected}}},
         {"kappa",
          {{"kappa", g.kappa.kappa},
           {"p_bar", g.kappa.p_bar},
           {"pe_bar", g.kappa.pe_bar},
           {"interpretation", g.kappa.interpretation},
           {"degenerate", g.kappa.degenerate}}},
         {"ci_full_agreement", ci_to_json(g.ci_full_agreement, "full_agreement")},
         {"ci_reliability", ci_to_json(g.ci_reliability, "reliability")}});
  }

  return json{{"artifact_version", report.artifact_version},
              {"rng_algorithm", report.rng_algorithm},
              {"emitted_at", report.emitted_at},
              {"options",
               {{"seed", report.options.seed},
                {"bootstrap_B", report.options.bootstrap_B},
                {"confidence_level", report.options.confidence_level},
                {"allow_partial", report.options.allow_partial}}},
              {"per_generator", per_generator},
              {"ci_comparisons",
               {{"full_agreement", comparisons_to_json(report.comparisons_full_agreement)},
                {"reliability", comparisons_to_json(report.comparisons_reliability)}}}};
}

Report report_from_json(const json& j) {
  try {
    Report report;
    report.artifact_version = j.at("artifact_version").get<std::string>();
    report.rng_algorithm = j.at("rng_algorithm").get<std::string>();
    report.emitted_at = j.at("emitted_at").get<std::string>();
    const json& options = j.at("options");
    report.options.seed = options.at("seed").get<std::uint64_t>();
    report.options.bootstrap_B = options.at("bootstrap_B").get<std::int64_t>();
    report.options.confidence_level = options.at("confidence_level").get<double>();
    report.options.allow_partial = options.at("allow_partial").get<bool>();

    for (const auto& item : j.at("per_generator")) {
      GeneratorReport g;
      g.experiment_id = item.at("experiment_id").get<std::string>();
      g.generator_model = item.at("generator_model").get<std::string>();
      g.dropped_incomplete = item.at("dropped_incomplete").get<std::int64_t>();
      const json& s = item.at("summary");
      g.summary.generator_model = g.generator_model;
      g.summary.n_questions = s.at("n_questions").get<std::int64_t>();
      g.summary.n_full = s.at("n_full").get<std::int64_t>();
      g.summary.n_partial = s.at("n_partial").get<std::int64_t>();
      g.summary.n_none = s.at("n_none").get<std::int64_t>();
      g.summary.n_majority = s.at("n_majority").get<std::int64_t>();
      g.summary.n_reliable = s.at("n_reliable").get<std::int64_t>();
      g.summary.full_rate = s.at("full_rate").get<double>();
      g.summary.partial_rate = s.at("partial_rate").get<double>();
      g.summary.none_rate = s.at("none_rate").get<double>();
      g.summary.majority_vote_rate = s.at("majority_vote_rate").get<double>();
      g.summary.reliability_rate = s.at("reliability_rate").get<double>();
      const json& c = item.at("chi_square");
      g.chi_square.statistic = c.at("statistic").get<double>();
      g.chi_square.df = c.at("df").get<int>();
      g.chi_square.p_value = c.at("p_value").get<double>();
      for (AnswerOption o : kAllOptions)
        g.chi_square.observed[index_of(o)] = c.at("observed").at(to_string(o)).get<std::int64_t>();
      g.chi_square.expected = c.at("expected").get<double>();
      const json& k = item.at("kappa");
      g.kappa.kappa = k.at("kappa").get<double>();
      g.kappa.p_bar = k.at("p_bar").get<double>();
      g.kappa.pe_bar = k.at("pe_bar").get<double>();
      g.kappa.interpretation = k.at("interpretation").get<std::string>();
      g.kappa.degenerate = k.at("degenerate").get<bool>();
      g.ci_full_agreement = ci_from_json(item.at("ci_full_agreement"));
      g.ci_reliability = ci_from_json(item.at("ci_reliability"));
      report.per_generator.push_back(std::move(g));
    }

    const json& comparisons = j.at("ci_comparisons");
    report.comparisons_full_agreement = comparisons_from_json(comparisons.at("full_agreement"));
    report.comparisons_reliability = comparisons_from_json(comparisons.at("reliability"));
    return report;
  } catch (const json::exception& e) {
    throw SchemaError(std::string("report JSON does not match the expected schema: ") + e.what());
  }
}

void write_report(const Report& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report file: " + path.string());
  out << report_to_json(report).dump(2) << "\n";
  if (!out) throw IoError("write failed for report file: " + path.string());
}

Report read_report(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open report file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw SchemaError("report file " + path.string() + " is not valid JSON: " + e.what());
  }
  return report_from_json(j);
}

}  // namespace quorum
