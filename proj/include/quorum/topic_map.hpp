#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

namespace quorum {

// A (topic, subtopic) pair drawn from the loaded topic map.
struct TopicRef {
  std::string topic;
  std::string subtopic;

  bool operator==(const TopicRef&) const = default;
};

// Ordered topic -> subtopics mapping. Order follows the data file, so seeded
// sampling over the flattened pair list is reproducible.
class TopicMap {
 public:
  struct Entry {
    std::string topic;
    std::vector<std::string> subtopics;
  };

  // Validates: at least one topic, no duplicate topic names, every topic has
  // at least one subtopic, no blank names. Throws ConfigError listing every
  // violation.
  explicit TopicMap(std::vector<Entry> entries);

  const std::vector<Entry>& entries() const { return entries_; }

  bool contains(const TopicRef& ref) const;

  // Flattened (topic, subtopic) pairs in file order.
  std::size_t pair_count() const { return pair_count_; }
  TopicRef pair_at(std::size_t index) const;

  // Parses the JSON text form: {"topics": [{"topic": ..., "subtopics": [...]}]}.
  static TopicMap parse(const std::string& json_text);

 private:
  std::vector<Entry> entries_;
  std::size_t pair_count_ = 0;
};

TopicMap load_topic_map(const std::filesystem::path& path);

}  // namespace quorum
