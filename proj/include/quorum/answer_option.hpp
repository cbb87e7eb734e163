#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace quorum {

// The four multiple-choice labels. Exactly these four exist; anything else
// fails to parse.
enum class AnswerOption : int { A = 0, B = 1, C = 2, D = 3 };

inline constexpr int kOptionCount = 4;

inline constexpr std::array<AnswerOption, 4> kAllOptions{
    AnswerOption::A, AnswerOption::B, AnswerOption::C, AnswerOption::D};

constexpr int index_of(AnswerOption o) { return static_cast<int>(o); }

constexpr char to_char(AnswerOption o) { return static_cast<char>('A' + index_of(o)); }

std::string to_string(AnswerOption o);

// Accepts 'A'..'D' and 'a'..'d'.
std::optional<AnswerOption> option_from_char(char c);

// Throws ParseError for anything that is not a single A-D letter.
AnswerOption option_from_string(std::string_view s);

}  // namespace quorum
