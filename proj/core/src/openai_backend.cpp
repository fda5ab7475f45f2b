#include "laca/openai_backend.hpp"

#include <cstdlib>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include "laca/error.hpp"

namespace laca {

std::string api_key_from_env() {
  const char* key = std::getenv(kApiKeyEnv);
  if (key == nullptr || *key == '\0') {
    throw AuthError(fmt::format("environment variable {} is not set", kApiKeyEnv));
  }
  return key;
}

std::string chat_request_body(const ChatRequest& request) {
  nlohmann::ordered_json body;
  body["model"] = request.model;
  auto& messages = body["messages"];
  messages = nlohmann::ordered_json::array();
  for (const auto& m : request.messages) {
    nlohmann::ordered_json msg;
    msg["role"] = m.role;
    msg["content"] = m.content;
    messages.push_back(std::move(msg));
  }
  body["temperature"] = request.temperature;
  body["max_tokens"] = request.max_tokens;
  return body.dump();
}

std::string parse_chat_response(std::string_view body) {
  try {
    const auto doc = nlohmann::json::parse(body);
    const auto& content = doc.at("choices").at(0).at("message").at("content");
    if (content.is_null()) return {};
    return content.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw BackendError(fmt::format("malformed chat-completions response: {}", e.what()));
  }
}

OpenAICompatibleBackend::OpenAICompatibleBackend(OpenAIBackendOptions options)
    : options_(std::move(options)) {
  auto url = options_.base_url;
  while (!url.empty() && url.back() == '/') url.pop_back();
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError(fmt::format("base URL '{}' has no scheme", options_.base_url));
  }
  const auto scheme = url.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ConfigError(fmt::format("base URL '{}' must be http or https", options_.base_url));
  }
  const auto path_start = url.find('/', scheme_end + 3);
  origin_ = url.substr(0, path_start);
  path_ = (path_start == std::string::npos ? std::string() : url.substr(path_start)) +
          "/v1/chat/completions";
}

ChatResult OpenAICompatibleBackend::complete(const ChatRequest& request) {
  // One client per call: httplib clients are not safe for concurrent use.
  httplib::Client client(origin_);
  const auto timeout = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout).count();
  client.set_connection_timeout(static_cast<time_t>(timeout));
  client.set_read_timeout(static_cast<time_t>(timeout));
  client.set_write_timeout(static_cast<time_t>(timeout));
  if (!options_.api_key.empty()) client.set_bearer_token_auth(options_.api_key);

  auto res = client.Post(path_, chat_request_body(request), "application/json");
  if (!res) {
    return ChatResult::error(FailureKind::Transient, 0,
                             fmt::format("transport error: {}", httplib::to_string(res.error())));
  }
  const int status = res->status;
  if (status == 401 || status == 403) {
    return ChatResult::error(FailureKind::Auth, status, res->body);
  }
  if (status == 429 || status >= 500) {
    return ChatResult::error(FailureKind::Transient, status, res->body);
  }
  if (status != 200) {
    return ChatResult::error(FailureKind::Permanent, status, res->body);
  }
  try {
    return ChatResult::success(parse_chat_response(res->body));
  } catch (const BackendError& e) {
    return ChatResult::error(FailureKind::Permanent, status, e.what());
  }
}

}  // namespace laca
