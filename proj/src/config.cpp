#include "quorum/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "quorum/errors.hpp"

namespace quorum {

namespace {

using nlohmann::json;

ScriptedBehavior::Step step_from_json(const json& j, std::vector<std::string>& violations,
                                      const std::string& ctx) {
  ScriptedBehavior::Step step;
  if (j.is_string()) {
    step.text = j.get<std::string>();
  } else if (j.is_object()) {
    if (j.contains("fail") && j["fail"].is_boolean()) step.fail = j["fail"].get<bool>();
    if (j.contains("text") && j["text"].is_string()) step.text = j["text"].get<std::string>();
    if (!step.fail && step.text.empty())
      violations.push_back(ctx + ": scripted step object needs 'text' or 'fail': true");
  } else {
    violations.push_back(ctx + ": scripted step must be a string or an object");
  }
  return step;
}

json step_to_json(const ScriptedBehavior::Step& step) {
  if (step.fail) return json{{"fail", true}};
  return json(step.text);
}

std::string load_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

AgentConfig agent_config_from_json(const json& j, std::string* error_prefix_out) {
  std::vector<std::string> violations;
  AgentConfig config;
  const std::string ctx =
      error_prefix_out ? *error_prefix_out
                       : (j.is_object() && j.contains("model_id") && j["model_id"].is_string()
                              ? "model '" + j["model_id"].get<std::string>() + "'"
                              : "model entry");

  if (!j.is_object()) throw ConfigError(ctx + ": must be a JSON object");

  if (j.contains("model_id") && j["model_id"].is_string())
    config.model_id = j["model_id"].get<std::string>();
  else
    violations.push_back(ctx + ": missing string 'model_id'");

  if (j.contains("backend") && j["backend"].is_string()) {
    try {
      config.backend_kind = backend_kind_from_string(j["backend"].get<std::string>());
    } catch (const ConfigError& e) {
      violations.push_back(ctx + ": " + e.what());
    }
  } else {
    violations.push_back(ctx + ": missing string 'backend'");
  }

  if (j.contains("endpoint_url")) {
    if (j["endpoint_url"].is_string())
      config.endpoint_url = j["endpoint_url"].get<std::string>();
    else
      violations.push_back(ctx + ": endpoint_url must be a string");
  }
  if (j.contains("api_key_env")) {
    if (j["api_key_env"].is_string())
      config.api_key_env = j["api_key_env"].get<std::string>();
    else
      violations.push_back(ctx + ": api_key_env must be a string");
  }
  if (j.contains("request_params")) {
    if (j["request_params"].is_object())
      config.request_params = j["request_params"];
    else
      violations.push_back(ctx + ": request_params must be an object");
  }
  if (j.contains("headers")) {
    if (j["headers"].is_object()) {
      for (const auto& [name, value] : j["headers"].items()) {
        if (value.is_string())
          config.header_templates[name] = value.get<std::string>();
        else
          violations.push_back(ctx + ": header '" + name + "' must be a string");
      }
    } else {
      violations.push_back(ctx + ": headers must be an object");
    }
  }
  if (j.contains("timeout_ms")) {
    if (j["timeout_ms"].is_number_integer())
      config.timeout = std::chrono::milliseconds(j["timeout_ms"].get<std::int64_t>());
    else
      violations.push_back(ctx + ": timeout_ms must be an integer");
  }
  if (j.contains("max_retries")) {
    if (j["max_retries"].is_number_integer())
      config.max_retries = j["max_retries"].get<int>();
    else
      violations.push_back(ctx + ": max_retries must be an integer");
  }

  if (j.contains("stochastic")) {
    const json& s = j["stochastic"];
    if (s.is_object()) {
      StochasticAgentParams params;
      if (s.contains("accuracy") && s["accuracy"].is_number())
        params.accuracy = s["accuracy"].get<double>();
      if (s.contains("correlation") && s["correlation"].is_number())
        params.correlation = s["correlation"].get<double>();
      if (s.contains("rng_seed") && s["rng_seed"].is_number_unsigned())
        params.rng_seed = s["rng_seed"].get<std::uint64_t>();
      if (s.contains("population_seed") && s["population_seed"].is_number_unsigned())
        params.population_seed = s["population_seed"].get<std::uint64_t>();
      config.stochastic = params;
    } else {
      violations.push_back(ctx + ": stochastic must be an object");
    }
  }

  if (j.contains("scripted")) {
    const json& s = j["scripted"];
    if (s.is_object()) {
      ScriptedBehavior behavior;
      if (s.contains("generations") && s["generations"].is_array()) {
        std::size_t i = 0;
        for (const auto& item : s["generations"])
          behavior.generations.push_back(
              step_from_json(item, violations, ctx + " generations[" + std::to_string(i++) + "]"));
      }
      if (s.contains("answers") && s["answers"].is_array()) {
        std::size_t i = 0;
        for (const auto& item : s["answers"])
          behavior.answers.push_back(
              step_from_json(item, violations, ctx + " answers[" + std::to_string(i++) + "]"));
      }
      if (s.contains("answers_by_id") && s["answers_by_id"].is_object()) {
        for (const auto& [qid, item] : s["answers_by_id"].items())
          behavior.answers_by_id[qid] =
              step_from_json(item, violations, ctx + " answers_by_id['" + qid + "']");
      }
      if (s.contains("default_answer") && s["default_answer"].is_string())
        behavior.default_answer = s["default_answer"].get<std::string>();
      config.scripted = std::move(behavior);
    } else {
      violations.push_back(ctx + ": scripted must be an object");
    }
  }

  if (!violations.empty()) throw ConfigError(std::move(violations));
  return config;
}

json agent_config_to_json(const AgentConfig& config) {
  json j{{"model_id", config.model_id},
         {"backend", to_string(config.backend_kind)},
         {"timeout_ms", config.timeout.count()},
         {"max_retries", config.max_retries}};
  if (config.endpoint_url) j["endpoint_url"] = *config.endpoint_url;
  if (config.api_key_env) j["api_key_env"] = *config.api_key_env;
  if (!config.request_params.empty()) j["request_params"] = config.request_params;
  if (!config.header_templates.empty()) {
    json headers = json::object();
    for (const auto& [name, value] : config.header_templates) headers[name] = value;
    j["headers"] = headers;
  }
  if (config.stochastic) {
    j["stochastic"] = {{"accuracy", config.stochastic->accuracy},
                       {"correlation", config.stochastic->correlation},
                       {"rng_seed", config.stochastic->rng_seed},
                       {"population_seed", config.stochastic->population_seed}};
  }
  if (config.scripted) {
    json s = json::object();
    json generations = json::array();
    for (const auto& step : config.scripted->generations) generations.push_back(step_to_json(step));
    if (!generations.empty()) s["generations"] = generations;
    json answers = json::array();
    for (const auto& step : config.scripted->answers) answers.push_back(step_to_json(step));
    if (!answers.empty()) s["answers"] = answers;
    if (!config.scripted->answers_by_id.empty()) {
      json by_id = json::object();
      for (const auto& [qid, step] : config.scripted->answers_by_id)
        by_id[qid] = step_to_json(step);
      s["answers_by_id"] = by_id;
    }
    if (config.scripted->default_answer) s["default_answer"] = *config.scripted->default_answer;
    j["scripted"] = s;
  }
  return j;
}

RunConfig run_config_from_json(const json& j, const std::filesystem::path& base_dir) {
  if (!j.is_object()) throw ConfigError("run config must be a JSON object");

  std::vector<std::string> violations;
  RunConfig config;

  if (j.contains("run_label")) {
    if (j["run_label"].is_string())
      config.run_label = j["run_label"].get<std::string>();
    else
      violations.push_back("run_label must be a string");
  }

  if (j.contains("models") && j["models"].is_array()) {
    std::size_t i = 0;
    for (const auto& item : j["models"]) {
      std::string prefix = "models[" + std::to_string(i++) + "]";
      try {
        config.models.push_back(agent_config_from_json(item, &prefix));
      } catch (const ConfigError& e) {
        violations.insert(violations.end(), e.violations().begin(), e.violations().end());
      }
    }
  } else {
    violations.push_back("missing 'models' array");
  }

  auto resolve = [&base_dir](const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() || base_dir.empty() ? path : base_dir / path;
  };

  if (j.contains("n_questions")) {
    if (j["n_questions"].is_number_integer())
      config.n_questions = j["n_questions"].get<std::int64_t>();
    else
      violations.push_back("n_questions must be an integer");
  }
  if (j.contains("topic_map")) {
    if (j["topic_map"].is_string())
      config.topic_map_path = resolve(j["topic_map"].get<std::string>());
    else
      violations.push_back("topic_map must be a path string");
  }
  if (j.contains("rotation")) {
    const json& r = j["rotation"];
    if (r.is_string() && r.get<std::string>() == "full_rotation") {
      config.rotation = {RotationMode::FullRotation, ""};
    } else if (r.is_object() && r.contains("mode") && r["mode"].is_string()) {
      const std::string mode = r["mode"].get<std::string>();
      if (mode == "full_rotation") {
        config.rotation = {RotationMode::FullRotation, ""};
      } else if (mode == "single_generator") {
        if (r.contains("generator") && r["generator"].is_string())
          config.rotation = {RotationMode::SingleGenerator, r["generator"].get<std::string>()};
        else
          violations.push_back("single_generator rotation needs a 'generator' model id");
      } else {
        violations.push_back("rotation mode must be full_rotation or single_generator");
      }
    } else {
      violations.push_back("rotation must be \"full_rotation\" or an object with a 'mode'");
    }
  }
  if (j.contains("seed")) {
    if (j["seed"].is_number_unsigned() || j["seed"].is_number_integer())
      config.seed = j["seed"].get<std::uint64_t>();
    else
      violations.push_back("seed must be an integer");
  }
  if (j.contains("bootstrap_B")) {
    if (j["bootstrap_B"].is_number_integer())
      config.bootstrap_B = j["bootstrap_B"].get<std::int64_t>();
    else
      violations.push_back("bootstrap_B must be an integer");
  }
  if (j.contains("confidence_level")) {
    if (j["confidence_level"].is_number())
      config.confidence_level = j["confidence_level"].get<double>();
    else
      violations.push_back("confidence_level must be a number");
  }
  if (j.contains("output_dir")) {
    if (j["output_dir"].is_string())
      config.output_dir = resolve(j["output_dir"].get<std::string>());
    else
      violations.push_back("output_dir must be a path string");
  }
  if (j.contains("max_parallel_requests")) {
    if (j["max_parallel_requests"].is_number_integer())
      config.max_parallel_requests = j["max_parallel_requests"].get<int>();
    else
      violations.push_back("max_parallel_requests must be an integer");
  }
  if (j.contains("clock")) {
    if (j["clock"].is_string())
      config.clock_mode = j["clock"].get<std::string>();
    else
      violations.push_back("clock must be a string");
  }

  if (j.contains("prompt_templates")) {
    const json& p = j["prompt_templates"];
    if (!p.is_object()) {
      violations.push_back("prompt_templates must be an object");
    } else {
      // Custom templates are loaded and checked here, at config load time.
      if (p.contains("generation_file") && p["generation_file"].is_string()) {
        try {
          config.prompts.generation = load_text_file(resolve(p["generation_file"].get<std::string>()));
        } catch (const Error& e) {
          violations.push_back(e.what());
        }
      }
      if (p.contains("answering_file") && p["answering_file"].is_string()) {
        try {
          config.prompts.answering = load_text_file(resolve(p["answering_file"].get<std::string>()));
        } catch (const Error& e) {
          violations.push_back(e.what());
        }
      }
    }
  }

  for (auto& v : config.violations()) violations.push_back(std::move(v));
  if (!violations.empty()) throw ConfigError(std::move(violations));
  return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return run_config_from_json(j, path.parent_path());
}

json run_config_snapshot(const RunConfig& config) {
  json models = json::array();
  for (const auto& m : config.models) models.push_back(agent_config_to_json(m));
  json rotation;
  if (config.rotation.mode == RotationMode::FullRotation)
    rotation = {{"mode", "full_rotation"}};
  else
    rotation = {{"mode", "single_generator"}, {"generator", config.rotation.generator}};
  // Output-location fields are intentionally absent: the snapshot describes
  // the experiment, not where a particular run put its files.
  return json{{"run_label", config.run_label},
              {"models", models},
              {"n_questions", config.n_questions},
              {"rotation", rotation},
              {"seed", config.seed},
              {"bootstrap_B", config.bootstrap_B},
              {"confidence_level", config.confidence_level},
              {"max_parallel_requests", config.max_parallel_requests},
              {"prompts", {{"generation", config.prompts.generation},
                           {"answering", config.prompts.answering}}}};
}

void preflight_run_config(const RunConfig& config) {
  std::vector<std::string> violations = config.violations();

  if (violations.empty()) {
    for (const auto& m : config.models) {
      if (m.backend_kind != BackendKind::HttpChat) continue;
      if (!std::getenv(m.api_key_env->c_str()))
        violations.push_back("model '" + m.model_id + "': environment variable '" +
                             *m.api_key_env + "' is not set");
    }
    try {
      load_topic_map(config.topic_map_path);
    } catch (const Error& e) {
      violations.push_back(e.what());
    }
  }

  if (!violations.empty()) throw ConfigError(std::move(violations));
}

}  // namespace quorum
