#include "doctest.h"

#include <algorithm>

#include "quorum/dataset_io.hpp"
#include "quorum/errors.hpp"
#include "quorum/rng.hpp"

#include "test_support.hpp"

using namespace quorum;
using namespace testsupport;

namespace {

std::size_t line_count(const std::string& text) {
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

// Random printable-ish strings with embedded newlines and multibyte UTF-8.
std::string random_text(CounterRng& rng) {
  static const char* pieces[] = {"alpha", "β-level", "p < 0.05", "line\nbreak", "comma, quote\"",
                                 "日本語", "x_i", "Answer: C", "  spaced  "};
  std::string out;
  const std::uint64_t n = 1 + rng.next_below(4);
  for (std::uint64_t i = 0; i < n; ++i) {
    if (i) out += ' ';
    out += pieces[rng.next_below(std::size(pieces))];
  }
  return out;
}

ExperimentDataset random_dataset(CounterRng& rng) {
  ExperimentDataset d;
  d.experiment_id = "rand-" + std::to_string(rng.next_below(1000));
  d.generator_model = "gen";
  d.answerer_models = {"a1", "a2", "a3"};
  d.config_snapshot = {{"seed", rng.next_below(100)}};
  const std::uint64_t n = rng.next_below(5);  // includes the empty dataset
  for (std::uint64_t i = 0; i < n; ++i) {
    QuestionRecord q = make_question(d.experiment_id + "-q" + std::to_string(i + 1), "gen",
                                     kAllOptions[rng.next_below(4)]);
    q.stem = random_text(rng);
    for (auto& option : q.options) option = random_text(rng);
    q.generator_explanation = random_text(rng);
    q.raw_generation = random_text(rng);
    d.questions.push_back(q);
    for (const auto& model : d.answerer_models) {
      AnswerRecord a = make_answer(q.question_id, model, kAllOptions[rng.next_below(4)]);
      a.justification = random_text(rng);
      a.raw_response = random_text(rng);
      d.answers.push_back(a);
    }
  }
  return d;
}

}  // namespace

TEST_CASE("empty dataset round-trips as a header-only file") {
  TempDir dir;
  ExperimentDataset d;
  d.experiment_id = "empty";
  d.generator_model = "gen";
  d.answerer_models = {"a1", "a2", "a3"};

  const auto path = dir / "empty.jsonl";
  write_dataset(d, path);
  CHECK(line_count(read_file(path)) == 1);

  const ExperimentDataset loaded = read_dataset(path);
  CHECK(loaded == d);
  CHECK(loaded.is_complete());
}

TEST_CASE("one question with three answers gives five lines and round-trips") {
  TempDir dir;
  const auto d = dataset_from_votes({{AnswerOption::A, AnswerOption::A, AnswerOption::B}},
                                    {AnswerOption::A});
  const auto path = dir / "one.jsonl";
  write_dataset(d, path);
  CHECK(line_count(read_file(path)) == 5);
  CHECK(read_dataset(path) == d);
}

TEST_CASE("round-trip property over random datasets") {
  TempDir dir;
  CounterRng rng(20240617);
  for (int i = 0; i < 25; ++i) {
    const ExperimentDataset d = random_dataset(rng);
    const auto path = dir / ("rt-" + std::to_string(i) + ".jsonl");
    write_dataset(d, path);
    CHECK(read_dataset(path) == d);
  }
}

TEST_CASE("serialization is byte-identical across writes") {
  TempDir dir;
  CounterRng rng(7);
  const ExperimentDataset d = random_dataset(rng);
  write_dataset(d, dir / "a.jsonl");
  write_dataset(d, dir / "b.jsonl");
  CHECK(read_file(dir / "a.jsonl") == read_file(dir / "b.jsonl"));
}

TEST_CASE("invalid dataset is rejected before any bytes are written") {
  TempDir dir;
  auto d = dataset_from_votes({{AnswerOption::A, AnswerOption::A, AnswerOption::A}},
                              {AnswerOption::A});
  d.answers.push_back(make_answer("no-such-question", "a1", AnswerOption::B));
  const auto path = dir / "invalid.jsonl";
  CHECK_THROWS_WITH_AS(write_dataset(d, path), doctest::Contains("unknown question"),
                       ValidationError);
  CHECK_FALSE(std::filesystem::exists(path));
}

TEST_CASE("duplicate answer is rejected naming the duplicate") {
  TempDir dir;
  const auto d = dataset_from_votes({{AnswerOption::A, AnswerOption::B, AnswerOption::C}},
                                    {AnswerOption::A});
  const auto path = dir / "dup.jsonl";
  write_dataset(d, path);

  // Append a second answer from the same answerer.
  std::string content = read_file(path);
  const auto dup = answer_to_json(make_answer(d.questions[0].question_id, "ans-2",
                                              AnswerOption::D)).dump();
  write_file(path, content + dup + "\n");

  CHECK_THROWS_WITH_AS(read_dataset(path), doctest::Contains("duplicate answer"), ValidationError);
  CHECK_THROWS_WITH_AS(read_dataset(path), doctest::Contains("ans-2"), ValidationError);
}

TEST_CASE("truncated last line reports its line number") {
  TempDir dir;
  const auto d = dataset_from_votes({{AnswerOption::A, AnswerOption::A, AnswerOption::A}},
                                    {AnswerOption::A});
  const auto path = dir / "trunc.jsonl";
  write_dataset(d, path);

  std::string content = read_file(path);
  content.resize(content.size() - 30);  // cut into the final record
  write_file(path, content);

  CHECK_THROWS_WITH_AS(read_dataset(path), doctest::Contains(":5:"), SchemaError);
}

TEST_CASE("unknown schema version is rejected") {
  TempDir dir;
  const auto path = dir / "schema.jsonl";
  write_file(path,
             R"({"kind":"header","schema_version":99,"experiment_id":"x","generator_model":"g",)"
             R"("answerer_models":["a","b","c"],"config_snapshot":{}})"
             "\n");
  CHECK_THROWS_WITH_AS(read_dataset(path), doctest::Contains("unknown schema version 99"),
                       SchemaError);
}

TEST_CASE("reader rejects structural problems") {
  TempDir dir;
  const std::string header =
      R"({"kind":"header","schema_version":1,"experiment_id":"x","generator_model":"g",)"
      R"("answerer_models":["a","b","c"],"config_snapshot":{}})"
      "\n";

  SUBCASE("missing header") {
    write_file(dir / "f.jsonl", R"({"kind":"question"})" "\n");
    CHECK_THROWS_WITH_AS(read_dataset(dir / "f.jsonl"),
                         doctest::Contains("first line must be the header"), SchemaError);
  }
  SUBCASE("unknown record kind") {
    write_file(dir / "f.jsonl", header + R"({"kind":"wat"})" "\n");
    CHECK_THROWS_WITH_AS(read_dataset(dir / "f.jsonl"), doctest::Contains("unknown record kind"),
                         SchemaError);
  }
  SUBCASE("empty file") {
    write_file(dir / "f.jsonl", "");
    CHECK_THROWS_AS(read_dataset(dir / "f.jsonl"), SchemaError);
  }
  SUBCASE("answer from the generator") {
    auto d = dataset_from_votes({{AnswerOption::A, AnswerOption::A, AnswerOption::A}},
                                {AnswerOption::A});
    AnswerRecord bad = make_answer(d.questions[0].question_id, "gen-model", AnswerOption::A);
    write_file(dir / "f.jsonl",
               read_file([&] {
                 write_dataset(d, dir / "ok.jsonl");
                 return dir / "ok.jsonl";
               }()) +
                   answer_to_json(bad).dump() + "\n");
    CHECK_THROWS_WITH_AS(read_dataset(dir / "f.jsonl"), doctest::Contains("generator"),
                         ValidationError);
  }
  SUBCASE("missing file") { CHECK_THROWS_AS(read_dataset(dir / "nope.jsonl"), IoError); }
}

TEST_CASE("datasets with missing answers load as partial") {
  TempDir dir;
  auto d = dataset_from_votes({{AnswerOption::A, AnswerOption::B, AnswerOption::C},
                               {AnswerOption::D, AnswerOption::D, AnswerOption::D}},
                              {AnswerOption::A, AnswerOption::D});
  d.answers.pop_back();  // second question now has 2 answers
  const auto path = dir / "partial.jsonl";
  write_dataset(d, path);

  const ExperimentDataset loaded = read_dataset(path);
  CHECK_FALSE(loaded.is_complete());
  CHECK(loaded.questions.size() == 2);
  CHECK(loaded.answers.size() == 5);
}

TEST_CASE("incremental writer produces the canonical serialization") {
  TempDir dir;
  const auto d = dataset_from_votes({{AnswerOption::A, AnswerOption::C, AnswerOption::C},
                                     {AnswerOption::B, AnswerOption::B, AnswerOption::B}},
                                    {AnswerOption::C, AnswerOption::B});
  write_dataset(d, dir / "canonical.jsonl");

  {
    DatasetWriter writer(dir / "incremental.jsonl", d.experiment_id, d.generator_model,
                         d.answerer_models, d.config_snapshot);
    for (const auto& q : d.questions) {
      writer.append_question(q);
      for (const auto& a : d.answers)
        if (a.question_id == q.question_id) writer.append_answer(a);
    }
  }
  CHECK(read_file(dir / "incremental.jsonl") == read_file(dir / "canonical.jsonl"));
}
