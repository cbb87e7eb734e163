#pragma once

#include <cstdio>
#include <filesystem>
#include <string>

#include "quorum/records.hpp"

namespace quorum {

inline constexpr int kDatasetSchemaVersion = 1;

// Serializes the dataset as UTF-8 JSON lines: a header record first, then one
// line per question or answer. Validates before writing and writes through a
// temp file + rename, so an invalid dataset never produces bytes on disk.
// Output is canonical: questions in dataset order, answers grouped per
// question in answerer_models order, keys alphabetical. Byte-identical for
// structurally equal datasets.
void write_dataset(const ExperimentDataset& dataset, const std::filesystem::path& path);

// Reads a dataset file, re-validating all invariants. Malformed lines report
// their line number; duplicate or dangling records report the offending ids.
// Datasets with missing answers load fine and report is_complete() == false.
ExperimentDataset read_dataset(const std::filesystem::path& path);

// Single-writer incremental append used during live runs. Each record is
// flushed as one full line so a killed process leaves only complete lines.
class DatasetWriter {
 public:
  DatasetWriter(const std::filesystem::path& path,
                const std::string& experiment_id,
                const std::string& generator_model,
                const std::array<std::string, 3>& answerer_models,
                const nlohmann::json& config_snapshot);
  ~DatasetWriter();

  DatasetWriter(const DatasetWriter&) = delete;
  DatasetWriter& operator=(const DatasetWriter&) = delete;

  void append_question(const QuestionRecord& question);
  void append_answer(const AnswerRecord& answer);
  void close();

  const std::filesystem::path& path() const { return path_; }

 private:
  void write_line(const std::string& line);

  std::filesystem::path path_;
  std::FILE* file_ = nullptr;
};

// Record-level JSON encoding, shared by the writer paths and the reader.
nlohmann::json question_to_json(const QuestionRecord& q);
nlohmann::json answer_to_json(const AnswerRecord& a);
QuestionRecord question_from_json(const nlohmann::json& j);
AnswerRecord answer_from_json(const nlohmann::json& j);

}  // namespace quorum
