#include "quorum/prompts.hpp"

#include <vector>

#include "quorum/errors.hpp"

namespace quorum {

namespace {

const char* kDefaultGenerationTemplate =
    "Generate a challenging PhD-level multiple-choice question in the field of "
    "[Topic], focusing on [Specific Concept]. The question should have four answer "
    "options labeled A, B, C, and D, with only one correct answer. Ensure the "
    "question tests deep understanding and critical thinking skills.\n"
    "\n"
    "Format your response exactly as follows:\n"
    "Question: <the full question text>\n"
    "A) <text of option A>\n"
    "B) <text of option B>\n"
    "C) <text of option C>\n"
    "D) <text of option D>\n"
    "Correct Answer: <the letter of the correct option>\n"
    "Explanation: <why the correct option is correct>";

const char* kDefaultAnsweringTemplate =
    "Please read the following Ph.D.-level statistics question and select the most "
    "appropriate answer (A, B, C, or D). Provide a detailed justification for your "
    "selection, explaining your reasoning and any relevant statistical principles.";

// Bracketed placeholder tokens: '[' + letters/spaces + ']'.
std::vector<std::string> find_placeholders(const std::string& text) {
  std::vector<std::string> found;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '[') continue;
    std::size_t j = i + 1;
    while (j < text.size() &&
           (std::isalpha(static_cast<unsigned char>(text[j])) || text[j] == ' '))
      ++j;
    if (j > i + 1 && j < text.size() && text[j] == ']') {
      found.push_back(text.substr(i, j - i + 1));
      i = j;
    }
  }
  return found;
}

void replace_once(std::string& text, std::string_view placeholder, const std::string& value) {
  const std::size_t pos = text.find(placeholder);
  if (pos == std::string::npos)
    throw ConfigError("generation template lacks placeholder " + std::string(placeholder));
  text.replace(pos, placeholder.size(), value);
}

}  // namespace

PromptTemplates PromptTemplates::defaults() {
  return {kDefaultGenerationTemplate, kDefaultAnsweringTemplate};
}

void validate_generation_template(const std::string& tmpl) {
  std::vector<std::string> violations;
  int topic_count = 0;
  int concept_count = 0;
  for (const auto& ph : find_placeholders(tmpl)) {
    if (ph == kTopicPlaceholder) {
      ++topic_count;
    } else if (ph == kConceptPlaceholder) {
      ++concept_count;
    } else {
      violations.push_back("generation template contains unknown placeholder " + ph +
                           " that rendering would leave unreplaced");
    }
  }
  if (topic_count != 1)
    violations.push_back("generation template must contain " + std::string(kTopicPlaceholder) +
                         " exactly once (found " + std::to_string(topic_count) + ")");
  if (concept_count != 1)
    violations.push_back("generation template must contain " + std::string(kConceptPlaceholder) +
                         " exactly once (found " + std::to_string(concept_count) + ")");
  if (!violations.empty()) throw ConfigError(std::move(violations));
}

void validate_answering_template(const std::string& tmpl) {
  std::vector<std::string> violations;
  for (const auto& ph : find_placeholders(tmpl))
    violations.push_back("answering template contains placeholder " + ph +
                         ", but answering prompts take no substitutions");
  if (!violations.empty()) throw ConfigError(std::move(violations));
}

std::string render_generation_prompt(const TopicRef& topic_ref) {
  return render_generation_prompt(topic_ref, kDefaultGenerationTemplate);
}

std::string render_generation_prompt(const TopicRef& topic_ref, const std::string& tmpl) {
  std::string prompt = tmpl;
  replace_once(prompt, kTopicPlaceholder, topic_ref.topic);
  replace_once(prompt, kConceptPlaceholder, topic_ref.subtopic);
  return prompt;
}

std::string render_answering_prompt(const QuestionRecord& question) {
  return render_answering_prompt(question, kDefaultAnsweringTemplate);
}

std::string render_answering_prompt(const QuestionRecord& question, const std::string& tmpl) {
  std::string prompt = tmpl;
  prompt += "\n\nQuestion: ";
  prompt += question.stem;
  for (AnswerOption o : kAllOptions) {
    prompt += '\n';
    prompt += to_char(o);
    prompt += ") ";
    prompt += question.option_text(o);
  }
  return prompt;
}

}  // namespace quorum
