#pragma once

#include <string>

#include "quorum/records.hpp"
#include "quorum/topic_map.hpp"

namespace quorum {

inline constexpr const char* kTopicPlaceholder = "[Topic]";
inline constexpr const char* kConceptPlaceholder = "[Specific Concept]";

// Prompt templates for the two request kinds. The defaults keep the question
// wording intact and append a machine-readable output-format instruction to
// the generation prompt so responses parse deterministically.
struct PromptTemplates {
  std::string generation;
  std::string answering;

  static PromptTemplates defaults();
};

// Rejects templates whose bracketed placeholders would survive rendering:
// the generation template must contain [Topic] and [Specific Concept] exactly
// once each and no other [...] placeholder. Throws ConfigError.
void validate_generation_template(const std::string& tmpl);

// The answering template must not contain any [...] placeholder.
void validate_answering_template(const std::string& tmpl);

std::string render_generation_prompt(const TopicRef& topic_ref);
std::string render_generation_prompt(const TopicRef& topic_ref, const std::string& tmpl);

// Renders the answering preamble followed by the stem and the four labeled
// options, verbatim. Never includes the generator's answer or explanation.
std::string render_answering_prompt(const QuestionRecord& question);
std::string render_answering_prompt(const QuestionRecord& question, const std::string& tmpl);

}  // namespace quorum
