#include "doctest.h"

#include "quorum/errors.hpp"
#include "quorum/prompts.hpp"
#include "quorum/rng.hpp"

#include "test_support.hpp"

using namespace quorum;
using namespace testsupport;

namespace {

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size()))
    ++count;
  return count;
}

std::size_t count_option_lines(const std::string& prompt) {
  std::size_t count = 0;
  std::size_t line_start = 0;
  while (line_start <= prompt.size()) {
    const std::size_t end = prompt.find('\n', line_start);
    const std::string line = prompt.substr(line_start, end - line_start);
    if (line.size() >= 3 && line[0] >= 'A' && line[0] <= 'D' && line[1] == ')' && line[2] == ' ')
      ++count;
    if (end == std::string::npos) break;
    line_start = end + 1;
  }
  return count;
}

}  // namespace

TEST_CASE("generation prompt substitutes topic and concept") {
  const std::string prompt = render_generation_prompt({"Bayesian inference", "Conjugate priors"});
  CHECK(prompt.find("in the field of Bayesian inference, focusing on Conjugate priors") !=
        std::string::npos);
  CHECK(prompt.find(kTopicPlaceholder) == std::string::npos);
  CHECK(prompt.find(kConceptPlaceholder) == std::string::npos);
  // wording of the question request is kept ahead of the format instruction
  CHECK(prompt.find("Generate a challenging PhD-level multiple-choice question") == 0);
  CHECK(prompt.find("four answer options labeled A, B, C, and D") != std::string::npos);
  CHECK(prompt.find("Correct Answer:") != std::string::npos);
}

TEST_CASE("each placeholder is substituted exactly once") {
  const std::string prompt = render_generation_prompt({"Survival analysis", "Censoring"});
  CHECK(count_occurrences(prompt, "Survival analysis") == 1);
  CHECK(count_occurrences(prompt, "Censoring") == 1);
}

TEST_CASE("custom template validation happens at load, not at render") {
  CHECK_NOTHROW(validate_generation_template(PromptTemplates::defaults().generation));
  CHECK_NOTHROW(validate_answering_template(PromptTemplates::defaults().answering));

  const std::string bad =
      "Ask about [Topic] and [Specific Concept] but also about [Difficulty Level].";
  CHECK_THROWS_WITH_AS(validate_generation_template(bad),
                       doctest::Contains("[Difficulty Level]"), ConfigError);
  CHECK_THROWS_AS(validate_generation_template("No placeholders at all."), ConfigError);
  CHECK_THROWS_AS(validate_generation_template("Only [Topic] here."), ConfigError);
  CHECK_THROWS_AS(validate_answering_template("Answer about [Topic] please."), ConfigError);

  // intervals and citations in brackets are not placeholders
  CHECK_NOTHROW(validate_answering_template("Use a [0, 1] interval and cite [1]."));
}

TEST_CASE("answering prompt lists the stem and exactly four labeled options") {
  const QuestionRecord q = make_question("q1");
  const std::string prompt = render_answering_prompt(q);
  CHECK(prompt.find(q.stem) != std::string::npos);
  CHECK(count_option_lines(prompt) == 4);
  for (AnswerOption o : kAllOptions)
    CHECK(prompt.find(std::string(1, to_char(o)) + ") " + q.option_text(o)) != std::string::npos);
  CHECK(prompt.find("select the most appropriate answer (A, B, C, or D)") != std::string::npos);
}

TEST_CASE("option content passes through verbatim, even if it looks like an answer") {
  QuestionRecord q = make_question("q1");
  q.options[1] = "The trap option saying Answer: C inside";
  const std::string prompt = render_answering_prompt(q);
  CHECK(prompt.find("B) The trap option saying Answer: C inside") != std::string::npos);
}

TEST_CASE("property: answering prompt never leaks the withheld fields") {
  CounterRng rng(555);
  for (int i = 0; i < 50; ++i) {
    QuestionRecord q = make_question("q" + std::to_string(i), "gen",
                                     kAllOptions[rng.next_below(4)]);
    q.generator_explanation =
        "secret-explanation-" + std::to_string(rng.next_u64());
    const std::string prompt = render_answering_prompt(q);
    CHECK(prompt.find(q.generator_explanation) == std::string::npos);
    CHECK(prompt.find("secret-explanation") == std::string::npos);
    CHECK(prompt.find("Correct Answer") == std::string::npos);
  }
}
