#include "quorum/orchestrator.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <future>
#include <iostream>
#include <semaphore>

#include "quorum/config.hpp"
#include "quorum/errors.hpp"
#include "quorum/rng.hpp"
#include "quorum/version.hpp"

namespace quorum {

std::string format_utc_timestamp(std::int64_t unix_seconds) {
  std::time_t t = static_cast<std::time_t>(unix_seconds);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ", tm.tm_year + 1900,
                tm.tm_mon + 1, tm.tm_mday, tm.tm_hour, tm.tm_min, tm.tm_sec);
  return buf;
}

Clock make_wall_clock() {
  return [] {
    const auto now = std::chrono::system_clock::now();
    return format_utc_timestamp(
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count());
  };
}

Clock make_logical_clock() {
  // 2000-01-01T00:00:00Z, one second per tick.
  auto counter = std::make_shared<std::atomic<std::int64_t>>(0);
  return [counter] { return format_utc_timestamp(946684800 + counter->fetch_add(1)); };
}

std::string sanitize_for_filename(const std::string& name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                    (c >= '0' && c <= '9') || c == '-' || c == '.' || c == '_';
    out += ok ? c : '_';
  }
  return out.empty() ? "model" : out;
}

std::vector<std::string> RunConfig::violations() const {
  std::vector<std::string> out;

  if (models.size() != 4)
    out.push_back("exactly 4 models are required, got " + std::to_string(models.size()));
  for (std::size_t i = 0; i < models.size(); ++i) {
    for (std::size_t j = i + 1; j < models.size(); ++j) {
      if (models[i].model_id == models[j].model_id)
        out.push_back("duplicate model id '" + models[i].model_id + "'");
    }
    for (auto& v : models[i].violations()) out.push_back(v);
  }

  if (n_questions < 1) out.push_back("n_questions must be >= 1");
  if (rotation.mode == RotationMode::SingleGenerator) {
    bool found = false;
    for (const auto& m : models) found = found || m.model_id == rotation.generator;
    if (!found)
      out.push_back("single_generator rotation names '" + rotation.generator +
                    "', which is not a configured model");
  } else if (models.size() < 2) {
    out.push_back("full rotation requires at least 2 models");
  }
  if (bootstrap_B < 100) out.push_back("bootstrap_B must be >= 100");
  if (!(confidence_level > 0.0 && confidence_level < 1.0))
    out.push_back("confidence_level must lie strictly between 0 and 1");
  if (topic_map_path.empty()) out.push_back("topic_map_path is required");
  if (output_dir.empty()) out.push_back("output_dir is required");
  if (max_parallel_requests < 1) out.push_back("max_parallel_requests must be >= 1");
  if (clock_mode != "auto" && clock_mode != "wall" && clock_mode != "logical")
    out.push_back("clock_mode must be auto, wall, or logical");

  try {
    validate_generation_template(prompts.generation);
  } catch (const ConfigError& e) {
    out.insert(out.end(), e.violations().begin(), e.violations().end());
  }
  try {
    validate_answering_template(prompts.answering);
  } catch (const ConfigError& e) {
    out.insert(out.end(), e.violations().begin(), e.violations().end());
  }
  return out;
}

void RunConfig::validate() const {
  auto out = violations();
  if (!out.empty()) throw ConfigError(std::move(out));
}

struct Orchestrator::Impl {
  RunConfig config;
  HttpTransport transport;
  Clock clock;
  TopicMap topics;
  std::counting_semaphore<> request_slots;

  Impl(RunConfig cfg, HttpTransport tr, Clock ck)
      : config(std::move(cfg)),
        transport(std::move(tr)),
        clock(std::move(ck)),
        topics(load_topic_map(config.topic_map_path)),
        request_slots(config.max_parallel_requests) {
    if (!clock) {
      bool any_http = false;
      for (const auto& m : config.models) any_http |= m.backend_kind == BackendKind::HttpChat;
      const bool wall = config.clock_mode == "wall" || (config.clock_mode == "auto" && any_http);
      clock = wall ? make_wall_clock() : make_logical_clock();
    }
  }

  const AgentConfig& agent_config(const std::string& model_id) const {
    for (const auto& m : config.models)
      if (m.model_id == model_id) return m;
    throw ConfigError("model '" + model_id + "' is not configured");
  }

  RunResult run_experiment(const std::string& generator_model) {
    auto generator = make_agent(agent_config(generator_model), transport);

    std::array<std::string, 3> answerer_ids;
    std::vector<std::unique_ptr<Agent>> answerers;
    std::size_t slot = 0;
    for (const auto& m : config.models) {
      if (m.model_id == generator_model) continue;
      if (slot >= answerer_ids.size())
        throw ConfigError("more than 3 answerer models configured");
      answerer_ids[slot++] = m.model_id;
      answerers.push_back(make_agent(m, transport));
    }

    const std::string experiment_id =
        config.run_label + "-" + sanitize_for_filename(generator_model);
    const std::uint64_t experiment_seed = derive_seed(config.seed, generator_model);
    CounterRng topic_rng(derive_seed(experiment_seed, "topics"));

    std::filesystem::create_directories(config.output_dir);
    RunResult result;
    result.dataset_path = config.output_dir / (experiment_id + ".jsonl");

    ExperimentDataset& dataset = result.dataset;
    dataset.experiment_id = experiment_id;
    dataset.generator_model = generator_model;
    dataset.answerer_models = answerer_ids;
    dataset.config_snapshot = run_config_snapshot(config);

    DatasetWriter writer(result.dataset_path, experiment_id, generator_model, answerer_ids,
                         dataset.config_snapshot);

    std::uint64_t generation_attempt = 0;
    for (std::int64_t i = 0; i < config.n_questions; ++i) {
      // Generation is sequential; unparseable outputs are regenerated with a
      // fresh topic draw and counted, never silently dropped.
      GenerationOutcome outcome;
      TopicRef topic_ref;
      for (;;) {
        topic_ref = topics.pair_at(topic_rng.next_below(topics.pair_count()));
        result.request_count++;
        try {
          outcome = generate_question(*generator, topic_ref, generation_attempt++,
                                      config.prompts);
          break;
        } catch (const ParseError& e) {
          result.skip_count++;
          std::cerr << "note: skipping generation for experiment '" << experiment_id
                    << "': " << e.what() << "\n";
        }
      }

      char qnum[32];
      std::snprintf(qnum, sizeof(qnum), "q%06lld", static_cast<long long>(i + 1));
      QuestionRecord question;
      question.question_id = experiment_id + "-" + qnum;
      question.topic_ref = topic_ref;
      question.stem = outcome.question.stem;
      question.options = outcome.question.options;
      question.generator_model = generator_model;
      question.generator_answer = outcome.question.correct;
      question.generator_explanation = outcome.question.explanation;
      question.created_at = clock();
      question.raw_generation = outcome.raw;

      writer.append_question(question);
      dataset.questions.push_back(question);

      // Fan out the three answer requests concurrently (bounded), then
      // persist in answerer order so completion order never shows in the file.
      std::array<std::future<AnswerOutcome>, 3> pending;
      for (std::size_t j = 0; j < answerers.size(); ++j) {
        Agent* agent = answerers[j].get();
        const QuestionRecord& q = question;
        const std::uint64_t sequence = static_cast<std::uint64_t>(i);
        result.request_count++;
        pending[j] = std::async(std::launch::async, [this, agent, &q, sequence] {
          request_slots.acquire();
          struct Release {
            std::counting_semaphore<>* s;
            ~Release() { s->release(); }
          } release{&request_slots};
          return answer_with_retry(*agent, q, sequence);
        });
      }

      std::array<std::optional<AnswerOutcome>, 3> outcomes;
      std::exception_ptr failure;
      for (std::size_t j = 0; j < pending.size(); ++j) {
        try {
          outcomes[j] = pending[j].get();
        } catch (...) {
          if (!failure) failure = std::current_exception();
        }
      }
      for (std::size_t j = 0; j < outcomes.size(); ++j) {
        if (!outcomes[j]) continue;
        AnswerRecord answer;
        answer.question_id = question.question_id;
        answer.answerer_model = answerer_ids[j];
        answer.selected = outcomes[j]->selected;
        answer.justification = outcomes[j]->justification;
        answer.created_at = clock();
        answer.raw_response = outcomes[j]->raw;
        writer.append_answer(answer);
        dataset.answers.push_back(answer);
      }
      if (failure) {
        writer.close();  // leave a loadable partial dataset behind
        std::rethrow_exception(failure);
      }
    }

    writer.close();
    dataset.validate();
    return result;
  }

  AnswerOutcome answer_with_retry(Agent& agent, const QuestionRecord& question,
                                  std::uint64_t sequence) {
    const int max_attempts = agent_config(agent.model_id()).max_retries + 1;
    for (int attempt = 1;; ++attempt) {
      try {
        return answer_question(agent, question, sequence, config.prompts);
      } catch (const NoOptionFound& e) {
        if (attempt >= max_attempts)
          throw ParseError("model '" + agent.model_id() + "' gave no parseable answer for '" +
                           question.question_id + "' after " + std::to_string(attempt) +
                           " attempts: " + e.what());
      }
    }
  }
};

Orchestrator::Orchestrator(RunConfig config, HttpTransport transport, Clock clock) {
  config.validate();
  impl_ = std::make_unique<Impl>(std::move(config), std::move(transport), std::move(clock));
}

Orchestrator::~Orchestrator() = default;

RunResult Orchestrator::run_experiment(const std::string& generator_model) {
  return impl_->run_experiment(generator_model);
}

std::vector<RunResult> Orchestrator::run_rotation() {
  std::vector<RunResult> results;
  for (const auto& m : impl_->config.models) {
    try {
      results.push_back(impl_->run_experiment(m.model_id));
    } catch (const Error& e) {
      // Completed datasets stay on disk; the error names the failing run.
      throw Error(e.error_class(), "experiment with generator '" + m.model_id +
                                       "' failed: " + e.what());
    }
  }
  return results;
}

std::vector<RunResult> Orchestrator::run() {
  std::vector<RunResult> results;
  if (impl_->config.rotation.mode == RotationMode::FullRotation) {
    results = run_rotation();
  } else {
    results.push_back(run_experiment(impl_->config.rotation.generator));
  }

  nlohmann::json datasets = nlohmann::json::array();
  for (const auto& r : results) {
    datasets.push_back({{"experiment_id", r.dataset.experiment_id},
                        {"file", r.dataset_path.filename().string()},
                        {"generator_model", r.dataset.generator_model},
                        {"n_questions", r.dataset.questions.size()},
                        {"skip_count", r.skip_count},
                        {"request_count", r.request_count}});
  }
  nlohmann::json manifest{{"artifact_version", kArtifactVersion},
                          {"rng_algorithm", CounterRng::kAlgorithmName},
                          {"config", run_config_snapshot(impl_->config)},
                          {"datasets", datasets}};
  std::ofstream out(manifest_path());
  if (!out) throw IoError("cannot write manifest: " + manifest_path().string());
  out << manifest.dump(2) << "\n";
  return results;
}

std::filesystem::path Orchestrator::manifest_path() const {
  return impl_->config.output_dir / "manifest.json";
}

const TopicMap& Orchestrator::topics() const { return impl_->topics; }

RunConfig make_synthetic_run_config(const SyntheticRunSpec& spec) {
  RunConfig config;
  config.run_label = spec.label;
  config.n_questions = spec.n_questions;
  config.seed = spec.seed;
  config.bootstrap_B = spec.bootstrap_B;
  config.confidence_level = spec.confidence_level;
  config.output_dir = spec.output_dir;
  config.topic_map_path = spec.topic_map_path;
  config.rotation = spec.rotation ? Rotation{RotationMode::FullRotation, ""}
                                  : Rotation{RotationMode::SingleGenerator, "sim-1"};

  const std::uint64_t population_seed = derive_seed(spec.seed, "population");
  for (int i = 1; i <= 4; ++i) {
    AgentConfig agent;
    agent.model_id = "sim-" + std::to_string(i);
    agent.backend_kind = BackendKind::Stochastic;
    StochasticAgentParams params;
    params.accuracy = spec.accuracy;
    params.correlation = spec.correlation;
    params.rng_seed = derive_seed(spec.seed, "agent-" + agent.model_id);
    params.population_seed = population_seed;
    agent.stochastic = params;
    config.models.push_back(std::move(agent));
  }
  return config;
}

}  // namespace quorum
