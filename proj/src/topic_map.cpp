#include "quorum/topic_map.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "quorum/errors.hpp"

namespace quorum {

TopicMap::TopicMap(std::vector<Entry> entries) : entries_(std::move(entries)) {
  std::vector<std::string> violations;
  if (entries_.empty()) violations.push_back("topic map has no topics");

  std::set<std::string> seen;
  for (const auto& entry : entries_) {
    if (entry.topic.empty()) violations.push_back("topic with empty name");
    if (!seen.insert(entry.topic).second)
      violations.push_back("duplicate topic '" + entry.topic + "'");
    if (entry.subtopics.empty())
      violations.push_back("topic '" + entry.topic + "' has no subtopics");
    std::set<std::string> sub_seen;
    for (const auto& sub : entry.subtopics) {
      if (sub.empty())
        violations.push_back("topic '" + entry.topic + "' has an empty subtopic");
      if (!sub_seen.insert(sub).second)
        violations.push_back("topic '" + entry.topic + "' lists duplicate subtopic '" + sub + "'");
    }
    pair_count_ += entry.subtopics.size();
  }

  if (!violations.empty()) throw ConfigError(std::move(violations));
}

bool TopicMap::contains(const TopicRef& ref) const {
  for (const auto& entry : entries_) {
    if (entry.topic != ref.topic) continue;
    for (const auto& sub : entry.subtopics)
      if (sub == ref.subtopic) return true;
  }
  return false;
}

TopicRef TopicMap::pair_at(std::size_t index) const {
  for (const auto& entry : entries_) {
    if (index < entry.subtopics.size()) return {entry.topic, entry.subtopics[index]};
    index -= entry.subtopics.size();
  }
  throw ValidationError("topic pair index out of range");
}

TopicMap TopicMap::parse(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("topic map is not valid JSON: ") + e.what());
  }

  if (!j.is_object() || !j.contains("topics") || !j["topics"].is_array())
    throw ConfigError("topic map must be an object with a 'topics' array");

  std::vector<Entry> entries;
  for (const auto& item : j["topics"]) {
    if (!item.is_object() || !item.contains("topic") || !item.contains("subtopics") ||
        !item["topic"].is_string() || !item["subtopics"].is_array())
      throw ConfigError("each topic entry needs a 'topic' string and a 'subtopics' array");
    Entry entry;
    entry.topic = item["topic"].get<std::string>();
    for (const auto& sub : item["subtopics"]) {
      if (!sub.is_string())
        throw ConfigError("subtopics of '" + entry.topic + "' must be strings");
      entry.subtopics.push_back(sub.get<std::string>());
    }
    entries.push_back(std::move(entry));
  }
  return TopicMap(std::move(entries));
}

TopicMap load_topic_map(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open topic map file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return TopicMap::parse(buffer.str());
}

}  // namespace quorum
