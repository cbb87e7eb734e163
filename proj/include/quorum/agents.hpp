#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "quorum/http_agent.hpp"
#include "quorum/mcq_parse.hpp"
#include "quorum/prompts.hpp"
#include "quorum/records.hpp"
#include "quorum/topic_map.hpp"

namespace quorum {

enum class BackendKind { HttpChat, Scripted, Stochastic };

const char* to_string(BackendKind kind);
BackendKind backend_kind_from_string(const std::string& s);

// Synthetic answerer/generator with tunable accuracy and error correlation.
// With probability `correlation` an agent copies the shared per-question
// population draw (correct with probability `accuracy`, otherwise a shared
// wrong option); otherwise it draws independently with the same marginal
// accuracy. All agents of one run must share population_seed.
struct StochasticAgentParams {
  double accuracy = 1.0;
  double correlation = 0.0;
  std::uint64_t rng_seed = 0;
  std::uint64_t population_seed = 0;
};

// Canned responses for bit-reproducible tests and replays.
struct ScriptedBehavior {
  struct Step {
    std::string text;
    bool fail = false;  // raise a transport error instead of responding
  };

  std::vector<Step> generations;            // consumed by generation attempt index
  std::vector<Step> answers;                // consumed by question sequence index
  std::map<std::string, Step> answers_by_id;  // question_id overrides
  std::optional<std::string> default_answer;
};

struct AgentConfig {
  std::string model_id;
  BackendKind backend_kind = BackendKind::Scripted;
  std::optional<std::string> endpoint_url;
  std::optional<std::string> api_key_env;
  nlohmann::json request_params = nlohmann::json::object();
  std::map<std::string, std::string> header_templates;  // value may contain ${API_KEY}
  std::chrono::milliseconds timeout{30000};
  int max_retries = 2;
  std::optional<StochasticAgentParams> stochastic;
  std::optional<ScriptedBehavior> scripted;

  // Returns every violation (http_chat requires endpoint_url/api_key_env,
  // scripted/stochastic forbid them, probability ranges, ...), empty if valid.
  std::vector<std::string> violations() const;
};

// One model backend. Implementations return the model's raw completion text;
// parsing happens in the operations below. The extra context parameters are
// for synthetic backends only -- the HTTP backend's request bytes depend on
// nothing but the prompt.
class Agent {
 public:
  explicit Agent(std::string model_id) : model_id_(std::move(model_id)) {}
  virtual ~Agent() = default;

  const std::string& model_id() const { return model_id_; }

  virtual std::string complete_generation(const std::string& prompt, const TopicRef& topic,
                                          std::uint64_t attempt) = 0;
  virtual std::string complete_answer(const std::string& prompt, const QuestionRecord& question,
                                      std::uint64_t sequence) = 0;

 private:
  std::string model_id_;
};

std::unique_ptr<Agent> make_agent(const AgentConfig& config,
                                  HttpTransport transport = nullptr);

struct GenerationOutcome {
  GeneratedQuestion question;
  std::string raw;
};

// Renders the generation prompt, queries the agent, parses the MCQ. Parse
// failures throw ParseError carrying the raw text; transport failures throw
// TransportError with the attempt count.
GenerationOutcome generate_question(Agent& agent, const TopicRef& topic_ref,
                                    std::uint64_t attempt = 0);
GenerationOutcome generate_question(Agent& agent, const TopicRef& topic_ref,
                                    std::uint64_t attempt, const PromptTemplates& templates);

struct AnswerOutcome {
  AnswerOption selected = AnswerOption::A;
  int rule = 0;
  std::string justification;
  std::string raw;
};

// Renders the answering prompt (stem + options only) and parses the selected
// letter. Requires agent != question.generator_model.
AnswerOutcome answer_question(Agent& agent, const QuestionRecord& question,
                              std::uint64_t sequence = 0);
AnswerOutcome answer_question(Agent& agent, const QuestionRecord& question,
                              std::uint64_t sequence, const PromptTemplates& templates);

}  // namespace quorum
