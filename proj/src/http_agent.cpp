#include "quorum/http_agent.hpp"

#include <httplib.h>

#include <nlohmann/json.hpp>

#include "quorum/errors.hpp"

namespace quorum {

namespace {

struct SplitUrl {
  std::string base;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw ConfigError("endpoint url '" + url + "' has no scheme");
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

HttpTransport default_http_transport() {
  return [](const HttpRequest& request) -> HttpResponse {
    try {
      const SplitUrl url = split_url(request.url);
      httplib::Client client(url.base);
      const auto seconds = request.timeout.count() / 1000;
      const auto microseconds = (request.timeout.count() % 1000) * 1000;
      client.set_connection_timeout(seconds, microseconds);
      client.set_read_timeout(seconds, microseconds);
      client.set_write_timeout(seconds, microseconds);

      httplib::Headers headers;
      for (const auto& [name, value] : request.headers) headers.emplace(name, value);

      auto result = client.Post(url.path, headers, request.body, "application/json");
      if (!result)
        return {0, "", "http request to " + request.url + " failed: " +
                           httplib::to_string(result.error())};
      return {result->status, result->body, ""};
    } catch (const std::exception& e) {
      return {0, "", std::string("http transport error: ") + e.what()};
    }
  };
}

std::string build_chat_request_body(const std::string& model_id, const std::string& prompt,
                                    const std::string& request_params_json) {
  nlohmann::json body{
      {"model", model_id},
      {"messages", nlohmann::json::array({{{"role", "user"}, {"content", prompt}}})}};
  if (!request_params_json.empty()) {
    const nlohmann::json params = nlohmann::json::parse(request_params_json);
    for (const auto& [key, value] : params.items()) body[key] = value;
  }
  return body.dump();
}

std::string extract_chat_content(const std::string& response_body) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(response_body);
  } catch (const nlohmann::json::parse_error&) {
    throw ParseError("chat response is not valid JSON");
  }
  if (j.contains("error")) {
    std::string message = "api error";
    if (j["error"].is_object() && j["error"].contains("message") &&
        j["error"]["message"].is_string())
      message = j["error"]["message"].get<std::string>();
    throw ParseError("chat response carries an error payload: " + message);
  }
  if (!j.contains("choices") || !j["choices"].is_array() || j["choices"].empty())
    throw ParseError("chat response has no choices");
  const auto& first = j["choices"][0];
  if (!first.contains("message") || !first["message"].contains("content") ||
      !first["message"]["content"].is_string())
    throw ParseError("chat response choice has no message content");
  return first["message"]["content"].get<std::string>();
}

}  // namespace quorum
