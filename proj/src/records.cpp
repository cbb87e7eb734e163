#include "quorum/records.hpp"

#include <set>
#include <unordered_map>
#include <unordered_set>

#include "quorum/errors.hpp"

namespace quorum {

namespace {

void validate_question(const QuestionRecord& q) {
  if (q.question_id.empty()) throw ValidationError("question with empty question_id");
  if (q.stem.empty()) throw ValidationError("question '" + q.question_id + "' has an empty stem");
  for (AnswerOption o : kAllOptions) {
    if (q.option_text(o).empty())
      throw ValidationError("question '" + q.question_id + "' has an empty option " +
                            to_string(o));
  }
  if (q.generator_model.empty())
    throw ValidationError("question '" + q.question_id + "' has no generator model");
}

}  // namespace

void ExperimentDataset::validate() const {
  if (generator_model.empty()) throw ValidationError("dataset has no generator model");

  std::set<std::string> answerers(answerer_models.begin(), answerer_models.end());
  if (answerers.size() != answerer_models.size())
    throw ValidationError("answerer models are not pairwise distinct");
  if (answerers.count(generator_model))
    throw ValidationError("generator '" + generator_model + "' is listed as an answerer");
  for (const auto& m : answerer_models)
    if (m.empty()) throw ValidationError("empty answerer model id");

  std::unordered_set<std::string> question_ids;
  for (const auto& q : questions) {
    validate_question(q);
    if (q.generator_model != generator_model)
      throw ValidationError("question '" + q.question_id + "' was generated by '" +
                            q.generator_model + "' but the dataset generator is '" +
                            generator_model + "'");
    if (!question_ids.insert(q.question_id).second)
      throw ValidationError("duplicate question id '" + q.question_id + "'");
  }

  std::set<std::pair<std::string, std::string>> answer_keys;
  for (const auto& a : answers) {
    if (!question_ids.count(a.question_id))
      throw ValidationError("answer references unknown question '" + a.question_id + "'");
    if (a.answerer_model == generator_model)
      throw ValidationError("answer to '" + a.question_id +
                            "' comes from the generator model '" + generator_model + "'");
    if (!answerers.count(a.answerer_model))
      throw ValidationError("answer to '" + a.question_id + "' comes from '" +
                            a.answerer_model + "', which is not an answerer of this experiment");
    if (!answer_keys.insert({a.question_id, a.answerer_model}).second)
      throw ValidationError("duplicate answer for question '" + a.question_id +
                            "' from '" + a.answerer_model + "'");
  }
}

bool ExperimentDataset::is_complete() const {
  std::unordered_map<std::string, int> counts;
  for (const auto& a : answers) counts[a.question_id]++;
  for (const auto& q : questions) {
    auto it = counts.find(q.question_id);
    if (it == counts.end() || it->second != static_cast<int>(answerer_models.size()))
      return false;
  }
  return true;
}

std::vector<const AnswerRecord*> ExperimentDataset::answers_for(
    const std::string& question_id) const {
  std::vector<const AnswerRecord*> out;
  for (const auto& a : answers)
    if (a.question_id == question_id) out.push_back(&a);
  return out;
}

}  // namespace quorum
