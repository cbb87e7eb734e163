#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "quorum/answer_option.hpp"
#include "quorum/topic_map.hpp"

namespace quorum {

// One generated multiple-choice question, including the generator's withheld
// answer and explanation. Immutable after construction.
struct QuestionRecord {
  std::string question_id;
  TopicRef topic_ref;
  std::string stem;
  std::array<std::string, 4> options;  // indexed by AnswerOption
  std::string generator_model;
  AnswerOption generator_answer = AnswerOption::A;
  std::string generator_explanation;
  std::string created_at;  // UTC ISO-8601
  std::string raw_generation;

  const std::string& option_text(AnswerOption o) const { return options[index_of(o)]; }

  bool operator==(const QuestionRecord&) const = default;
};

// One answering model's selection for one question.
struct AnswerRecord {
  std::string question_id;
  std::string answerer_model;
  AnswerOption selected = AnswerOption::A;
  std::string justification;
  std::string created_at;
  std::string raw_response;

  bool operator==(const AnswerRecord&) const = default;
};

// All questions and answers of one generator's experiment run.
struct ExperimentDataset {
  std::string experiment_id;
  std::string generator_model;
  std::array<std::string, 3> answerer_models;
  std::vector<QuestionRecord> questions;
  std::vector<AnswerRecord> answers;
  nlohmann::json config_snapshot = nlohmann::json::object();

  // Throws ValidationError naming the offending record on any invariant
  // violation: duplicate ids, unknown question references, answers from the
  // generator or from models outside answerer_models, empty stems or options.
  void validate() const;

  // True when every question has exactly one answer per answerer model.
  bool is_complete() const;

  std::vector<const AnswerRecord*> answers_for(const std::string& question_id) const;

  bool operator==(const ExperimentDataset&) const = default;
};

}  // namespace quorum
