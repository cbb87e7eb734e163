#include "quorum/agents.hpp"

#include <cstdlib>
#include <random>
#include <thread>

#include "quorum/errors.hpp"
#include "quorum/rng.hpp"

namespace quorum {

const char* to_string(BackendKind kind) {
  switch (kind) {
    case BackendKind::HttpChat: return "http_chat";
    case BackendKind::Scripted: return "scripted";
    case BackendKind::Stochastic: return "stochastic";
  }
  return "unknown";
}

BackendKind backend_kind_from_string(const std::string& s) {
  if (s == "http_chat") return BackendKind::HttpChat;
  if (s == "scripted") return BackendKind::Scripted;
  if (s == "stochastic") return BackendKind::Stochastic;
  throw ConfigError("unknown backend kind '" + s + "' (expected http_chat, scripted, or stochastic)");
}

std::vector<std::string> AgentConfig::violations() const {
  std::vector<std::string> out;
  const std::string who = "model '" + model_id + "'";
  if (model_id.empty()) out.push_back("agent with empty model_id");
  if (backend_kind == BackendKind::HttpChat) {
    if (!endpoint_url || endpoint_url->empty())
      out.push_back(who + ": http_chat backend requires endpoint_url");
    if (!api_key_env || api_key_env->empty())
      out.push_back(who + ": http_chat backend requires api_key_env");
  } else {
    if (endpoint_url) out.push_back(who + ": endpoint_url is only valid for http_chat backends");
    if (api_key_env) out.push_back(who + ": api_key_env is only valid for http_chat backends");
  }
  if (backend_kind == BackendKind::Stochastic) {
    if (!stochastic) {
      out.push_back(who + ": stochastic backend requires stochastic parameters");
    } else {
      if (!(stochastic->accuracy >= 0.0 && stochastic->accuracy <= 1.0))
        out.push_back(who + ": stochastic accuracy must lie in [0, 1]");
      if (!(stochastic->correlation >= 0.0 && stochastic->correlation <= 1.0))
        out.push_back(who + ": stochastic correlation must lie in [0, 1]");
    }
  } else if (stochastic) {
    out.push_back(who + ": stochastic parameters given for a non-stochastic backend");
  }
  if (backend_kind == BackendKind::Scripted && !scripted)
    out.push_back(who + ": scripted backend requires a script");
  if (max_retries < 0) out.push_back(who + ": max_retries must be >= 0");
  if (timeout.count() <= 0) out.push_back(who + ": timeout must be positive");
  return out;
}

namespace {

class ScriptedAgent final : public Agent {
 public:
  ScriptedAgent(std::string model_id, ScriptedBehavior behavior)
      : Agent(std::move(model_id)), behavior_(std::move(behavior)) {}

  std::string complete_generation(const std::string&, const TopicRef&,
                                  std::uint64_t attempt) override {
    if (attempt >= behavior_.generations.size())
      throw TransportError("model '" + model_id() + "': scripted generations exhausted at attempt " +
                           std::to_string(attempt));
    return step_text(behavior_.generations[attempt], "generation attempt " + std::to_string(attempt));
  }

  std::string complete_answer(const std::string&, const QuestionRecord& question,
                              std::uint64_t sequence) override {
    auto it = behavior_.answers_by_id.find(question.question_id);
    if (it != behavior_.answers_by_id.end())
      return step_text(it->second, "answer to '" + question.question_id + "'");
    if (sequence < behavior_.answers.size())
      return step_text(behavior_.answers[sequence], "answer #" + std::to_string(sequence));
    if (behavior_.default_answer) return *behavior_.default_answer;
    throw TransportError("model '" + model_id() + "': no scripted answer for question '" +
                         question.question_id + "'");
  }

 private:
  std::string step_text(const ScriptedBehavior::Step& step, const std::string& what) {
    if (step.fail)
      throw TransportError("model '" + model_id() + "': scripted transport failure at " + what);
    return step.text;
  }

  ScriptedBehavior behavior_;
};

class StochasticAgent final : public Agent {
 public:
  StochasticAgent(std::string model_id, StochasticAgentParams params)
      : Agent(std::move(model_id)), params_(params) {}

  std::string complete_generation(const std::string&, const TopicRef& topic,
                                  std::uint64_t attempt) override {
    CounterRng rng(derive_seed(derive_seed(params_.rng_seed, "generate"), attempt));
    const AnswerOption correct = kAllOptions[rng.next_below(kOptionCount)];
    const std::uint64_t variant = rng.next_u64() % 1000000;
    const std::string item = std::to_string(attempt) + "-" + std::to_string(variant);

    std::string out;
    out += "Question: In the context of " + topic.topic + ", which statement about " +
           topic.subtopic + " is correct? (synthetic item " + item + ")\n";
    for (AnswerOption o : kAllOptions) {
      out += to_char(o);
      out += ") Synthetic claim ";
      out += std::to_string(index_of(o) + 1);
      out += " about " + topic.subtopic + " for item " + item + ".\n";
    }
    out += "Correct Answer: ";
    out += to_char(correct);
    out += "\nExplanation: Claim ";
    out += std::to_string(index_of(correct) + 1);
    out += " was designated correct when synthesizing item " + item + ".";
    return out;
  }

  std::string complete_answer(const std::string&, const QuestionRecord& question,
                              std::uint64_t) override {
    const AnswerOption g = question.generator_answer;
    std::array<AnswerOption, 3> wrong{};
    int w = 0;
    for (AnswerOption o : kAllOptions)
      if (o != g) wrong[w++] = o;

    // Shared per-question population draw: right with probability `accuracy`,
    // otherwise one shared wrong option. Identical for every agent holding
    // the same population_seed.
    CounterRng population(
        derive_seed(derive_seed(params_.population_seed, "population"), question.question_id));
    const bool population_accurate = population.next_double() < params_.accuracy;
    const AnswerOption population_wrong = wrong[population.next_below(3)];

    // Own draws are always consumed so the stream layout never depends on
    // which branch is taken.
    CounterRng own(derive_seed(derive_seed(params_.rng_seed, "answer"), question.question_id));
    const bool copy_population = own.next_double() < params_.correlation;
    const bool own_accurate = own.next_double() < params_.accuracy;
    const AnswerOption own_wrong = wrong[own.next_below(3)];

    AnswerOption selected;
    if (copy_population) {
      selected = population_accurate ? g : population_wrong;
    } else {
      selected = own_accurate ? g : own_wrong;
    }

    std::string out = "Answer: ";
    out += to_char(selected);
    out += "\nSimulated rater draw for question " + question.question_id + ".";
    return out;
  }

 private:
  StochasticAgentParams params_;
};

class HttpChatAgent final : public Agent {
 public:
  HttpChatAgent(AgentConfig config, HttpTransport transport)
      : Agent(config.model_id), config_(std::move(config)), transport_(std::move(transport)) {
    const char* key = std::getenv(config_.api_key_env->c_str());
    if (!key)
      throw ConfigError("model '" + model_id() + "': environment variable '" +
                        *config_.api_key_env + "' is not set");
    api_key_ = key;
  }

  std::string complete_generation(const std::string& prompt, const TopicRef&,
                                  std::uint64_t) override {
    return complete(prompt);
  }

  std::string complete_answer(const std::string& prompt, const QuestionRecord&,
                              std::uint64_t) override {
    return complete(prompt);
  }

  // The request is a pure function of the prompt and the agent config.
  HttpRequest build_request(const std::string& prompt) const {
    HttpRequest request;
    request.url = *config_.endpoint_url;
    request.timeout = config_.timeout;
    request.body = build_chat_request_body(model_id(), prompt, config_.request_params.dump());

    auto headers = config_.header_templates;
    if (headers.empty()) headers = {{"Authorization", "Bearer ${API_KEY}"}};
    for (auto& [name, value] : headers) {
      std::string resolved = value;
      const std::string token = "${API_KEY}";
      for (std::size_t pos = resolved.find(token); pos != std::string::npos;
           pos = resolved.find(token))
        resolved.replace(pos, token.size(), api_key_);
      request.headers.emplace_back(name, resolved);
    }
    return request;
  }

 private:
  std::string complete(const std::string& prompt) {
    const HttpRequest request = build_request(prompt);
    const int max_attempts = config_.max_retries + 1;
    std::string last_error;

    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
      const HttpResponse response = transport_(request);
      if (response.transport_ok() && response.status >= 200 && response.status < 300)
        return extract_chat_content(response.body);

      const bool retryable = !response.transport_ok() || response.status == 429 ||
                             response.status >= 500;
      if (!response.transport_ok()) {
        last_error = response.transport_error;
      } else {
        last_error = "http status " + std::to_string(response.status);
        if (!response.body.empty())
          last_error += ": " + response.body.substr(0, 200);
      }
      if (!retryable)
        throw TransportError("model '" + model_id() + "': " + last_error, attempt);
      if (attempt < max_attempts) backoff(attempt);
    }
    throw TransportError("model '" + model_id() + "': " + last_error + " (after " +
                             std::to_string(max_attempts) + " attempts)",
                         max_attempts);
  }

  static void backoff(int attempt) {
    static thread_local std::mt19937 jitter_rng{std::random_device{}()};
    std::uniform_real_distribution<double> jitter(0.5, 1.5);
    const double base_ms = 100.0 * static_cast<double>(1 << std::min(attempt - 1, 6));
    const auto delay = std::chrono::milliseconds(
        static_cast<std::int64_t>(std::min(base_ms * jitter(jitter_rng), 5000.0)));
    std::this_thread::sleep_for(delay);
  }

  AgentConfig config_;
  HttpTransport transport_;
  std::string api_key_;
};

}  // namespace

std::unique_ptr<Agent> make_agent(const AgentConfig& config, HttpTransport transport) {
  auto violations = config.violations();
  if (!violations.empty()) throw ConfigError(std::move(violations));

  switch (config.backend_kind) {
    case BackendKind::Scripted:
      return std::make_unique<ScriptedAgent>(config.model_id, *config.scripted);
    case BackendKind::Stochastic:
      return std::make_unique<StochasticAgent>(config.model_id, *config.stochastic);
    case BackendKind::HttpChat:
      return std::make_unique<HttpChatAgent>(
          config, transport ? std::move(transport) : default_http_transport());
  }
  throw ConfigError("unhandled backend kind");
}

GenerationOutcome generate_question(Agent& agent, const TopicRef& topic_ref,
                                    std::uint64_t attempt) {
  return generate_question(agent, topic_ref, attempt, PromptTemplates::defaults());
}

GenerationOutcome generate_question(Agent& agent, const TopicRef& topic_ref,
                                    std::uint64_t attempt, const PromptTemplates& templates) {
  const std::string prompt = render_generation_prompt(topic_ref, templates.generation);
  std::string raw = agent.complete_generation(prompt, topic_ref, attempt);
  try {
    GeneratedQuestion question = parse_generated_mcq(raw);
    return {std::move(question), std::move(raw)};
  } catch (const ParseError& e) {
    std::string snippet = raw.substr(0, 200);
    throw ParseError("model '" + agent.model_id() + "' produced an unparseable MCQ: " +
                     e.what() + "; raw output starts: " + snippet);
  }
}

AnswerOutcome answer_question(Agent& agent, const QuestionRecord& question,
                              std::uint64_t sequence) {
  return answer_question(agent, question, sequence, PromptTemplates::defaults());
}

AnswerOutcome answer_question(Agent& agent, const QuestionRecord& question,
                              std::uint64_t sequence, const PromptTemplates& templates) {
  if (agent.model_id() == question.generator_model)
    throw ValidationError("model '" + agent.model_id() +
                          "' cannot answer its own question '" + question.question_id + "'");
  const std::string prompt = render_answering_prompt(question, templates.answering);
  std::string raw = agent.complete_answer(prompt, question, sequence);
  ParsedAnswer parsed = parse_answer_response(raw);
  return {parsed.selected, parsed.rule, std::move(parsed.justification), std::move(raw)};
}

}  // namespace quorum
