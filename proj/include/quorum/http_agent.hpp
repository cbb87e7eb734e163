#pragma once

#include <chrono>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace quorum {

struct HttpRequest {
  std::string url;
  std::vector<std::pair<std::string, std::string>> headers;
  std::string body;
  std::chrono::milliseconds timeout{30000};
};

struct HttpResponse {
  int status = 0;
  std::string body;
  std::string transport_error;  // non-empty means no HTTP exchange happened

  bool transport_ok() const { return transport_error.empty(); }
};

// Injectable transport so tests can intercept request bytes and fake
// responses without a socket.
using HttpTransport = std::function<HttpResponse(const HttpRequest&)>;

// cpp-httplib backed transport (https when built with OpenSSL support).
HttpTransport default_http_transport();

// Builds the chat-completion request body: model, a single user message, and
// any configured sampling parameters merged in.
std::string build_chat_request_body(const std::string& model_id, const std::string& prompt,
                                    const std::string& request_params_json);

// Extracts choices[0].message.content; throws ParseError when the response
// shape does not match.
std::string extract_chat_content(const std::string& response_body);

}  // namespace quorum
