#include "quorum/answer_option.hpp"

#include "quorum/errors.hpp"

namespace quorum {

std::string to_string(AnswerOption o) { return std::string(1, to_char(o)); }

std::optional<AnswerOption> option_from_char(char c) {
  if (c >= 'a' && c <= 'd') c = static_cast<char>(c - 'a' + 'A');
  if (c < 'A' || c > 'D') return std::nullopt;
  return static_cast<AnswerOption>(c - 'A');
}

AnswerOption option_from_string(std::string_view s) {
  if (s.size() == 1) {
    if (auto o = option_from_char(s[0])) return *o;
  }
  throw ParseError("not an answer option (expected one of A, B, C, D): '" +
                   std::string(s) + "'");
}

}  // namespace quorum
