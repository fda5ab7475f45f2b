#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "laca/coders.hpp"

namespace laca {

struct ChatMessage {
  std::string role;
  std::string content;
};

// Identity of the work item behind a request. Live backends ignore it; the
// mock derives its score from it.
struct RequestContext {
  CoderId coder = CoderId::DZ;
  Persona persona = Persona::None;
  Source source = Source::FoxNews;
  std::string transcript_id;
  std::size_t chunk_index = 0;
  Candidate candidate = Candidate::Biden;
};

struct ChatRequest {
  std::string model;
  std::vector<ChatMessage> messages;
  double temperature = 0.0;
  int max_tokens = 10;
  RequestContext context;
};

enum class FailureKind { Transient, Auth, Permanent };

struct ChatResult {
  std::optional<std::string> content;  // set on success
  FailureKind failure = FailureKind::Permanent;
  int http_status = 0;
  std::string diagnostic;

  bool ok() const { return content.has_value(); }
  static ChatResult success(std::string text) {
    ChatResult r;
    r.content = std::move(text);
    r.http_status = 200;
    return r;
  }
  static ChatResult error(FailureKind kind, int status, std::string why) {
    ChatResult r;
    r.failure = kind;
    r.http_status = status;
    r.diagnostic = std::move(why);
    return r;
  }
};

// A chat-completions endpoint. Implementations must allow concurrent calls
// to complete().
class ChatBackend {
 public:
  virtual ~ChatBackend() = default;
  virtual ChatResult complete(const ChatRequest& request) = 0;
  virtual std::string_view name() const = 0;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{500};
  double backoff_factor = 2.0;
  // Injected so tests can run without wall-clock delays.
  std::function<void(std::chrono::milliseconds)> sleep;

  std::chrono::milliseconds backoff_before(int attempt) const;  // attempt >= 2
};

ChatRequest make_chat_request(const CoderConfig& config, const PromptRequest& prompt,
                              RequestContext context);

struct CodingOutcome {
  SentimentScore score;
  int attempts = 0;
  // No reply was obtained: the retry budget ran out on transient failures or
  // a non-retryable error occurred. The score is MISSING and `diagnostic`
  // says why.
  bool failed = false;
  std::string diagnostic;
};

// One request per call, retried only on transient failures. Parse failures
// are not retried. Throws AuthError on authentication failure.
CodingOutcome code_chunk(ChatBackend& backend, const CoderConfig& config, const Chunk& chunk,
                         Source source, Candidate candidate, const RetryPolicy& retry = {});

}  // namespace laca
