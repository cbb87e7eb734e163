#pragma once

#include <array>
#include <string>
#include <string_view>

#include "quorum/answer_option.hpp"

namespace quorum {

// A parsed generator output before it becomes a QuestionRecord.
struct GeneratedQuestion {
  std::string stem;
  std::array<std::string, 4> options;
  AnswerOption correct = AnswerOption::A;
  std::string explanation;

  bool operator==(const GeneratedQuestion&) const = default;
};

// Parses the labeled-section MCQ layout (Question / A)..D) / Correct Answer /
// Explanation). Throws ParseError naming the missing or malformed section,
// e.g. "missing option D".
GeneratedQuestion parse_generated_mcq(std::string_view raw);

struct ParsedOption {
  AnswerOption option;
  int rule;  // 1-3, which extraction rule matched; recorded for audit
};

// Answer-letter extraction. Precedence:
//   1. a line matching "Answer: <L>" (case-insensitive)
//   2. first standalone option letter followed by ')' '.' or ':' at a line start
//   3. first standalone capital A-D token
// Throws NoOptionFound when no rule matches. Total over arbitrary UTF-8.
ParsedOption parse_selected_option(std::string_view raw);

struct ParsedAnswer {
  AnswerOption selected;
  int rule;
  std::string justification;  // raw text minus the matched answer line
};

ParsedAnswer parse_answer_response(std::string_view raw);

}  // namespace quorum
