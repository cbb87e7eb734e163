#include "quorum/dataset_io.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <map>
#include <system_error>

#include "quorum/errors.hpp"

namespace quorum {

namespace {

using nlohmann::json;

std::string require_string(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j[key].is_string())
    throw SchemaError(where + ": missing or non-string field '" + key + "'");
  return j[key].get<std::string>();
}

json header_to_json(const ExperimentDataset& d) {
  return json{{"kind", "header"},
              {"schema_version", kDatasetSchemaVersion},
              {"experiment_id", d.experiment_id},
              {"generator_model", d.generator_model},
              {"answerer_models", d.answerer_models},
              {"config_snapshot", d.config_snapshot}};
}

}  // namespace

json question_to_json(const QuestionRecord& q) {
  json options = json::object();
  for (AnswerOption o : kAllOptions) options[to_string(o)] = q.option_text(o);
  return json{{"kind", "question"},
              {"question_id", q.question_id},
              {"topic", q.topic_ref.topic},
              {"subtopic", q.topic_ref.subtopic},
              {"stem", q.stem},
              {"options", options},
              {"generator_model", q.generator_model},
              {"generator_answer", to_string(q.generator_answer)},
              {"generator_explanation", q.generator_explanation},
              {"created_at", q.created_at},
              {"raw_generation", q.raw_generation}};
}

json answer_to_json(const AnswerRecord& a) {
  return json{{"kind", "answer"},
              {"question_id", a.question_id},
              {"answerer_model", a.answerer_model},
              {"selected", to_string(a.selected)},
              {"justification", a.justification},
              {"created_at", a.created_at},
              {"raw_response", a.raw_response}};
}

QuestionRecord question_from_json(const json& j) {
  QuestionRecord q;
  q.question_id = require_string(j, "question_id", "question record");
  const std::string where = "question '" + q.question_id + "'";
  q.topic_ref.topic = require_string(j, "topic", where);
  q.topic_ref.subtopic = require_string(j, "subtopic", where);
  q.stem = require_string(j, "stem", where);
  if (!j.contains("options") || !j["options"].is_object())
    throw SchemaError(where + ": missing options object");
  const json& options = j["options"];
  if (options.size() != kAllOptions.size())
    throw SchemaError(where + ": expected exactly 4 options, got " +
                      std::to_string(options.size()));
  for (AnswerOption o : kAllOptions) {
    const std::string key = to_string(o);
    if (!options.contains(key) || !options[key].is_string())
      throw SchemaError(where + ": missing option " + key);
    q.options[index_of(o)] = options[key].get<std::string>();
  }
  q.generator_model = require_string(j, "generator_model", where);
  q.generator_answer = option_from_string(require_string(j, "generator_answer", where));
  q.generator_explanation = require_string(j, "generator_explanation", where);
  q.created_at = require_string(j, "created_at", where);
  q.raw_generation = require_string(j, "raw_generation", where);
  return q;
}

AnswerRecord answer_from_json(const json& j) {
  AnswerRecord a;
  a.question_id = require_string(j, "question_id", "answer record");
  const std::string where = "answer to '" + a.question_id + "'";
  a.answerer_model = require_string(j, "answerer_model", where);
  a.selected = option_from_string(require_string(j, "selected", where));
  a.justification = require_string(j, "justification", where);
  a.created_at = require_string(j, "created_at", where);
  a.raw_response = require_string(j, "raw_response", where);
  return a;
}

void write_dataset(const ExperimentDataset& dataset, const std::filesystem::path& path) {
  dataset.validate();

  // Canonical answer order: grouped per question, answerers in header order.
  std::map<std::pair<std::string, std::string>, const AnswerRecord*> by_key;
  for (const auto& a : dataset.answers) by_key[{a.question_id, a.answerer_model}] = &a;

  std::string payload = header_to_json(dataset).dump();
  payload += '\n';
  for (const auto& q : dataset.questions) {
    payload += question_to_json(q).dump();
    payload += '\n';
    for (const auto& model : dataset.answerer_models) {
      auto it = by_key.find({q.question_id, model});
      if (it == by_key.end()) continue;
      payload += answer_to_json(*it->second).dump();
      payload += '\n';
    }
  }

  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    if (!out) throw IoError("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot move '" + tmp.string() + "' to '" + path.string() +
                        "': " + ec.message());
}

ExperimentDataset read_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open dataset file: " + path.string());

  ExperimentDataset dataset;
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;

    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error&) {
      throw SchemaError(path.string() + ":" + std::to_string(line_no) +
                        ": malformed record line (truncated or not valid JSON)");
    }
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
      throw SchemaError(where + ": record without a 'kind' field");
    const std::string kind = j["kind"].get<std::string>();

    if (!have_header) {
      if (kind != "header") throw SchemaError(where + ": first line must be the header record");
      if (!j.contains("schema_version") || !j["schema_version"].is_number_integer())
        throw SchemaError(where + ": header without integer schema_version");
      const int version = j["schema_version"].get<int>();
      if (version != kDatasetSchemaVersion)
        throw SchemaError(where + ": unknown schema version " + std::to_string(version) +
                          " (this build reads version " +
                          std::to_string(kDatasetSchemaVersion) + ")");
      dataset.experiment_id = require_string(j, "experiment_id", "header");
      dataset.generator_model = require_string(j, "generator_model", "header");
      if (!j.contains("answerer_models") || !j["answerer_models"].is_array() ||
          j["answerer_models"].size() != dataset.answerer_models.size())
        throw SchemaError(where + ": header must list exactly 3 answerer_models");
      for (std::size_t i = 0; i < dataset.answerer_models.size(); ++i) {
        if (!j["answerer_models"][i].is_string())
          throw SchemaError(where + ": answerer_models must be strings");
        dataset.answerer_models[i] = j["answerer_models"][i].get<std::string>();
      }
      dataset.config_snapshot =
          j.contains("config_snapshot") ? j["config_snapshot"] : json::object();
      have_header = true;
      continue;
    }

    try {
      if (kind == "question") {
        dataset.questions.push_back(question_from_json(j));
      } else if (kind == "answer") {
        dataset.answers.push_back(answer_from_json(j));
      } else if (kind == "header") {
        throw SchemaError("second header record");
      } else {
        throw SchemaError("unknown record kind '" + kind + "'");
      }
    } catch (const Error& e) {
      throw SchemaError(where + ": " + e.what());
    }
  }

  if (!have_header)
    throw SchemaError(path.string() + ": empty file, expected a header record");

  dataset.validate();
  return dataset;
}

DatasetWriter::DatasetWriter(const std::filesystem::path& path,
                             const std::string& experiment_id,
                             const std::string& generator_model,
                             const std::array<std::string, 3>& answerer_models,
                             const nlohmann::json& config_snapshot)
    : path_(path) {
  file_ = std::fopen(path.string().c_str(), "wb");
  if (!file_)
    throw IoError("cannot open '" + path.string() + "' for writing: " + std::strerror(errno));
  ExperimentDataset header;
  header.experiment_id = experiment_id;
  header.generator_model = generator_model;
  header.answerer_models = answerer_models;
  header.config_snapshot = config_snapshot;
  write_line(header_to_json(header).dump());
}

DatasetWriter::~DatasetWriter() { close(); }

void DatasetWriter::append_question(const QuestionRecord& question) {
  write_line(question_to_json(question).dump());
}

void DatasetWriter::append_answer(const AnswerRecord& answer) {
  write_line(answer_to_json(answer).dump());
}

void DatasetWriter::write_line(const std::string& line) {
  if (!file_) throw IoError("dataset writer for '" + path_.string() + "' is closed");
  std::string buf = line;
  buf += '\n';
  // One fwrite + flush per record keeps lines whole under abrupt kills.
  if (std::fwrite(buf.data(), 1, buf.size(), file_) != buf.size() || std::fflush(file_) != 0)
    throw IoError("write failed for '" + path_.string() + "': " + std::strerror(errno));
}

void DatasetWriter::close() {
  if (file_) {
    std::fclose(file_);
    file_ = nullptr;
  }
}

}  // namespace quorum
