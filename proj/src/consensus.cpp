#include "quorum/consensus.hpp"

#include <set>
#include <unordered_map>

#include "quorum/errors.hpp"

namespace quorum {

std::string to_string(AgreementCategory category) {
  switch (category) {
    case AgreementCategory::FullAgreement: return "full_agreement";
    case AgreementCategory::PartialAgreement: return "partial_agreement";
    case AgreementCategory::NoAgreement: return "no_agreement";
  }
  return "unknown";
}

Tally tally_options(std::span<const AnswerOption> selections) {
  Tally tally{};
  for (AnswerOption o : selections) tally[index_of(o)]++;
  return tally;
}

Tally tally_answers(std::span<const AnswerRecord> answers) {
  if (answers.size() != 3)
    throw ValidationError("tally requires exactly 3 answers, got " +
                          std::to_string(answers.size()));
  std::set<std::string> answerers;
  for (const auto& a : answers) {
    if (a.question_id != answers.front().question_id)
      throw ValidationError("tally over mixed question ids: '" +
                            answers.front().question_id + "' vs '" + a.question_id + "'");
    if (!answerers.insert(a.answerer_model).second)
      throw ValidationError("duplicate answerer '" + a.answerer_model +
                            "' for question '" + a.question_id + "'");
  }
  Tally tally{};
  for (const auto& a : answers) tally[index_of(a.selected)]++;
  return tally;
}

AgreementCategory classify_agreement(const Tally& tally) {
  int max_count = 0;
  for (int count : tally) max_count = std::max(max_count, count);
  switch (max_count) {
    case 3: return AgreementCategory::FullAgreement;
    case 2: return AgreementCategory::PartialAgreement;
    default: return AgreementCategory::NoAgreement;
  }
}

std::optional<AnswerOption> consensus_answer(const Tally& tally) {
  // With 3 voters over 4 options an option with count >= 2 is unique.
  for (AnswerOption o : kAllOptions)
    if (tally[index_of(o)] >= 2) return o;
  return std::nullopt;
}

int reliability_bit(std::optional<AnswerOption> consensus, AnswerOption generator_answer) {
  return consensus && *consensus == generator_answer ? 1 : 0;
}

ConsensusResult consensus_for_question(const QuestionRecord& question,
                                       std::span<const AnswerRecord> answers) {
  for (const auto& a : answers) {
    if (a.question_id != question.question_id)
      throw ValidationError("answer for '" + a.question_id +
                            "' passed with question '" + question.question_id + "'");
  }
  ConsensusResult result;
  result.question_id = question.question_id;
  result.tally = tally_answers(answers);
  result.category = classify_agreement(result.tally);
  result.consensus = consensus_answer(result.tally);
  result.reliability = reliability_bit(result.consensus, question.generator_answer);
  return result;
}

ExperimentSummary summarize_experiment(const ExperimentDataset& dataset) {
  dataset.validate();
  if (dataset.questions.empty())
    throw ValidationError("cannot summarize an experiment with zero questions");
  if (!dataset.is_complete())
    throw ValidationError("dataset '" + dataset.experiment_id +
                          "' is incomplete: not every question has 3 answers");

  std::unordered_map<std::string, std::vector<AnswerRecord>> by_question;
  for (const auto& a : dataset.answers) by_question[a.question_id].push_back(a);

  ExperimentSummary s;
  s.generator_model = dataset.generator_model;
  s.n_questions = static_cast<std::int64_t>(dataset.questions.size());
  for (const auto& q : dataset.questions) {
    const auto result = consensus_for_question(q, by_question.at(q.question_id));
    switch (result.category) {
      case AgreementCategory::FullAgreement: s.n_full++; break;
      case AgreementCategory::PartialAgreement: s.n_partial++; break;
      case AgreementCategory::NoAgreement: s.n_none++; break;
    }
    if (result.category != AgreementCategory::NoAgreement) s.n_majority++;
    s.n_reliable += result.reliability;
  }

  const double n = static_cast<double>(s.n_questions);
  s.full_rate = static_cast<double>(s.n_full) / n;
  s.partial_rate = static_cast<double>(s.n_partial) / n;
  s.none_rate = static_cast<double>(s.n_none) / n;
  s.majority_vote_rate = static_cast<double>(s.n_majority) / n;
  s.reliability_rate = static_cast<double>(s.n_reliable) / n;
  return s;
}

}  // namespace quorum
