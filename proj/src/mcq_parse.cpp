#include "quorum/mcq_parse.hpp"

#include <cctype>
#include <optional>
#include <vector>

#include "quorum/errors.hpp"

namespace quorum {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

// Case-insensitive "does `line` start with `prefix`", returning the rest.
std::optional<std::string_view> strip_prefix_ci(std::string_view line, std::string_view prefix) {
  if (line.size() < prefix.size()) return std::nullopt;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(line[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i])))
      return std::nullopt;
  }
  return line.substr(prefix.size());
}

// "A)" / "B." / "C:" at the start of a (trimmed) line.
std::optional<std::pair<AnswerOption, std::string_view>> match_option_label(
    std::string_view line) {
  std::string_view t = trim(line);
  if (t.size() < 2) return std::nullopt;
  auto option = option_from_char(t[0]);
  if (!option || !(t[0] >= 'A' && t[0] <= 'D')) return std::nullopt;
  if (t[1] != ')' && t[1] != '.' && t[1] != ':') return std::nullopt;
  return std::make_pair(*option, trim(t.substr(2)));
}

// First standalone A-D letter in the trimmed remainder of a label line, e.g.
// "Correct Answer: (C)" or "Correct Answer: C.".
std::optional<AnswerOption> first_standalone_letter(std::string_view text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] < 'A' || text[i] > 'D') continue;
    const bool left_ok = i == 0 || !is_word_char(text[i - 1]);
    const bool right_ok = i + 1 == text.size() || !is_word_char(text[i + 1]);
    if (left_ok && right_ok) return option_from_char(text[i]);
  }
  return std::nullopt;
}

}  // namespace

GeneratedQuestion parse_generated_mcq(std::string_view raw) {
  GeneratedQuestion out;
  std::array<bool, 4> have_option{};
  bool have_stem = false;
  bool have_correct = false;
  bool have_explanation = false;

  enum class Section { None, Stem, Option, Explanation };
  Section section = Section::None;
  int current_option = -1;

  auto append_to = [](std::string& dst, std::string_view more) {
    if (!dst.empty()) dst += '\n';
    dst.append(more.begin(), more.end());
  };

  for (std::string_view line : split_lines(raw)) {
    std::string_view t = trim(line);

    if (auto rest = strip_prefix_ci(t, "question:")) {
      have_stem = true;
      section = Section::Stem;
      out.stem.assign(trim(*rest));
      continue;
    }
    if (auto labeled = match_option_label(t)) {
      current_option = index_of(labeled->first);
      have_option[current_option] = true;
      section = Section::Option;
      out.options[current_option].assign(labeled->second);
      continue;
    }
    if (auto rest = strip_prefix_ci(t, "correct answer")) {
      std::string_view r = trim(*rest);
      if (!r.empty() && (r.front() == ':' || r.front() == '-')) r = trim(r.substr(1));
      auto letter = first_standalone_letter(r);
      if (!letter) throw ParseError("Correct Answer line has no option letter");
      out.correct = *letter;
      have_correct = true;
      section = Section::None;
      continue;
    }
    if (auto rest = strip_prefix_ci(t, "explanation:")) {
      have_explanation = true;
      section = Section::Explanation;
      out.explanation.assign(trim(*rest));
      continue;
    }

    if (t.empty()) continue;
    switch (section) {
      case Section::Stem: append_to(out.stem, t); break;
      case Section::Option: append_to(out.options[current_option], t); break;
      case Section::Explanation: append_to(out.explanation, t); break;
      case Section::None: break;  // preamble chatter, ignored
    }
  }

  if (!have_stem || out.stem.empty()) throw ParseError("missing Question section");
  for (AnswerOption o : kAllOptions) {
    if (!have_option[index_of(o)] || out.options[index_of(o)].empty())
      throw ParseError("missing option " + to_string(o));
  }
  if (!have_correct) throw ParseError("missing Correct Answer line");
  if (!have_explanation || out.explanation.empty()) throw ParseError("missing Explanation section");
  return out;
}

ParsedOption parse_selected_option(std::string_view raw) {
  const auto lines = split_lines(raw);

  // Rule 1: a line "Answer: <L>"; tolerates a Final/Correct qualifier.
  for (std::string_view line : lines) {
    std::string_view t = trim(line);
    std::string_view rest;
    if (auto r = strip_prefix_ci(t, "final answer")) {
      rest = *r;
    } else if (auto r2 = strip_prefix_ci(t, "correct answer")) {
      rest = *r2;
    } else if (auto r3 = strip_prefix_ci(t, "answer")) {
      rest = *r3;
    } else {
      continue;
    }
    rest = trim(rest);
    if (rest.empty() || rest.front() != ':') continue;
    rest = trim(rest.substr(1));
    if (!rest.empty() && rest.front() == '(') rest = trim(rest.substr(1));
    if (rest.empty()) continue;
    auto letter = option_from_char(rest.front());
    if (!letter) continue;
    if (rest.size() > 1 && is_word_char(rest[1])) continue;  // e.g. "Answer: Depends"
    return {*letter, 1};
  }

  // Rule 2: option label at a line start.
  for (std::string_view line : lines) {
    if (auto labeled = match_option_label(line)) return {labeled->first, 2};
  }

  // Rule 3: first standalone capital A-D anywhere.
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] < 'A' || raw[i] > 'D') continue;
    const bool left_ok = i == 0 || !is_word_char(raw[i - 1]);
    const bool right_ok = i + 1 == raw.size() || !is_word_char(raw[i + 1]);
    if (left_ok && right_ok) return {*option_from_char(raw[i]), 3};
  }

  throw NoOptionFound("no answer option found in response text");
}

ParsedAnswer parse_answer_response(std::string_view raw) {
  const ParsedOption parsed = parse_selected_option(raw);

  std::string justification;
  if (parsed.rule == 1) {
    // Drop the matched answer line; everything else is the justification.
    bool dropped = false;
    for (std::string_view line : split_lines(raw)) {
      if (!dropped) {
        std::string_view t = trim(line);
        const bool is_answer_line = strip_prefix_ci(t, "final answer") ||
                                    strip_prefix_ci(t, "correct answer") ||
                                    strip_prefix_ci(t, "answer");
        if (is_answer_line) {
          try {
            if (parse_selected_option(line).rule == 1) {
              dropped = true;
              continue;
            }
          } catch (const NoOptionFound&) {
          }
        }
      }
      if (!justification.empty()) justification += '\n';
      justification.append(line.begin(), line.end());
    }
  } else {
    justification.assign(raw);
  }

  std::string_view trimmed = trim(justification);
  return {parsed.option, parsed.rule, std::string(trimmed)};
}

}  // namespace quorum
