#pragma once

#include <chrono>
#include <string>

#include "laca/backend.hpp"

namespace laca {

inline constexpr const char* kApiKeyEnv = "LACA_API_KEY";

struct OpenAIBackendOptions {
  std::string base_url = "https://api.openai.com";
  std::string api_key;
  std::chrono::seconds timeout{60};
};

// Reads LACA_API_KEY; throws AuthError when unset or empty.
std::string api_key_from_env();

// The exact wire body: {"model", "messages", "temperature", "max_tokens"} in
// that order, compact.
std::string chat_request_body(const ChatRequest& request);

// Extracts choices[0].message.content. Throws BackendError on a malformed body.
std::string parse_chat_response(std::string_view body);

// POST {base_url}/v1/chat/completions with bearer auth. HTTP 401/403 map to
// FailureKind::Auth; transport errors, 429 and 5xx to Transient; anything
// else to Permanent.
class OpenAICompatibleBackend final : public ChatBackend {
 public:
  explicit OpenAICompatibleBackend(OpenAIBackendOptions options);

  ChatResult complete(const ChatRequest& request) override;
  std::string_view name() const override { return "openai-compatible"; }

  const std::string& endpoint_path() const { return path_; }

 private:
  OpenAIBackendOptions options_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;    // path prefix + /v1/chat/completions
};

}  // namespace laca
