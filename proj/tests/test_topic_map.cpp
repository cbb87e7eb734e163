#include "doctest.h"

#include "quorum/errors.hpp"
#include "quorum/topic_map.hpp"

#include "test_support.hpp"

using namespace quorum;

#ifndef QUORUM_DATA_DIR
#error "QUORUM_DATA_DIR must be defined by the build"
#endif

TEST_CASE("shipped default topic map") {
  const TopicMap map = load_topic_map(std::filesystem::path(QUORUM_DATA_DIR) / "topics.json");
  REQUIRE(map.entries().size() == 10);

  const auto& bayes = map.entries().front();
  CHECK(bayes.topic == "Bayesian inference");
  CHECK(bayes.subtopics == std::vector<std::string>{"Prior distributions", "Posterior updating",
                                                    "Bayes factors", "Conjugate priors"});
  CHECK(map.contains({"Survival analysis", "Censoring"}));
  CHECK(map.contains({"Statistical learning theory", "Cross-validation"}));
  CHECK_FALSE(map.contains({"Bayesian inference", "Censoring"}));

  // 9 topics with 4 subtopics, non-parametric methods with 3.
  CHECK(map.pair_count() == 39);
  CHECK(map.pair_at(0) == TopicRef{"Bayesian inference", "Prior distributions"});
  CHECK(map.pair_at(4) == TopicRef{"Markov Chain Monte Carlo methods", "Metropolis-Hastings algorithm"});
  CHECK(map.pair_at(38) == TopicRef{"Statistical learning theory", "Cross-validation"});
}

TEST_CASE("singleton topic map") {
  const TopicMap map = TopicMap::parse(R"({"topics":[{"topic":"T","subtopics":["S"]}]})");
  CHECK(map.entries().size() == 1);
  CHECK(map.pair_count() == 1);
  CHECK(map.pair_at(0) == TopicRef{"T", "S"});
}

TEST_CASE("duplicate topic is rejected") {
  const char* text = R"({"topics":[
    {"topic":"Regression analysis","subtopics":["Collinearity"]},
    {"topic":"Regression analysis","subtopics":["Model selection criteria"]}]})";
  CHECK_THROWS_WITH_AS(TopicMap::parse(text),
                       doctest::Contains("duplicate topic 'Regression analysis'"), ConfigError);
}

TEST_CASE("empty and malformed topic maps are rejected") {
  CHECK_THROWS_AS(TopicMap::parse(R"({"topics":[]})"), ConfigError);
  CHECK_THROWS_AS(TopicMap::parse(R"({"topics":[{"topic":"T","subtopics":[]}]})"), ConfigError);
  CHECK_THROWS_AS(TopicMap::parse("not json"), ConfigError);
  CHECK_THROWS_AS(TopicMap::parse(R"({"nope":1})"), ConfigError);
  CHECK_THROWS_AS(load_topic_map("/nonexistent/topics.json"), IoError);
}
