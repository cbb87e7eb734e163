#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>

#include "quorum/answer_option.hpp"
#include "quorum/records.hpp"

namespace quorum {

// Vote counts per option for one question; sums to 3.
using Tally = std::array<int, 4>;

enum class AgreementCategory { FullAgreement, PartialAgreement, NoAgreement };

std::string to_string(AgreementCategory category);

// Exactly 3 answers for one question from distinct answerers. Throws
// ValidationError on wrong count, duplicate answerer, or mixed question ids.
Tally tally_answers(std::span<const AnswerRecord> answers);

Tally tally_options(std::span<const AnswerOption> selections);

// Max count 3 -> Full, 2 -> Partial, 1 -> NoAgreement.
AgreementCategory classify_agreement(const Tally& tally);

// The unique option with count >= 2; absent on a 1-1-1 split (no tie-break).
std::optional<AnswerOption> consensus_answer(const Tally& tally);

// 1 iff a consensus exists and matches the generator's answer.
int reliability_bit(std::optional<AnswerOption> consensus, AnswerOption generator_answer);

struct ConsensusResult {
  std::string question_id;
  Tally tally{};
  AgreementCategory category = AgreementCategory::NoAgreement;
  std::optional<AnswerOption> consensus;
  int reliability = 0;
};

ConsensusResult consensus_for_question(const QuestionRecord& question,
                                       std::span<const AnswerRecord> answers);

// Per-experiment rates. Counts are kept alongside the derived fractions so
// exactness is never lost to rendering.
struct ExperimentSummary {
  std::string generator_model;
  std::int64_t n_questions = 0;
  std::int64_t n_full = 0;
  std::int64_t n_partial = 0;
  std::int64_t n_none = 0;
  std::int64_t n_majority = 0;  // category != NoAgreement
  std::int64_t n_reliable = 0;  // sum of reliability bits
  double full_rate = 0.0;
  double partial_rate = 0.0;
  double none_rate = 0.0;
  double majority_vote_rate = 0.0;
  double reliability_rate = 0.0;
};

// Requires a complete dataset (3 answers per question, n >= 1); throws
// ValidationError otherwise.
ExperimentSummary summarize_experiment(const ExperimentDataset& dataset);

}  // namespace quorum
