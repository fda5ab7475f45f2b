#include "laca/backend.hpp"

#include <cmath>
#include <thread>

#include <fmt/format.h>

#include "laca/error.hpp"

namespace laca {

std::chrono::milliseconds RetryPolicy::backoff_before(int attempt) const {
  if (attempt <= 1) return std::chrono::milliseconds{0};
  const double scale = std::pow(backoff_factor, attempt - 2);
  return std::chrono::milliseconds{
      static_cast<std::chrono::milliseconds::rep>(std::llround(initial_backoff.count() * scale))};
}

ChatRequest make_chat_request(const CoderConfig& config, const PromptRequest& prompt,
                              RequestContext context) {
  ChatRequest req;
  req.model = config.base_model;
  req.messages.push_back({"system", prompt.system_text});
  req.messages.push_back({"user", prompt.user_text});
  req.temperature = prompt.decoding.temperature;
  req.max_tokens = prompt.decoding.max_response_tokens;
  req.context = std::move(context);
  return req;
}

CodingOutcome code_chunk(ChatBackend& backend, const CoderConfig& config, const Chunk& chunk,
                         Source source, Candidate candidate, const RetryPolicy& retry) {
  const auto prompt = render_prompt(config, chunk, candidate);
  RequestContext ctx{config.id, config.persona, source, chunk.transcript_id, chunk.index, candidate};
  const auto request = make_chat_request(config, prompt, std::move(ctx));

  CodingOutcome out;
  out.score.coder = config.id;
  out.score.transcript_id = chunk.transcript_id;
  out.score.chunk_index = chunk.index;
  out.score.candidate = candidate;

  const int attempts = std::max(1, retry.max_attempts);
  for (int attempt = 1; attempt <= attempts; ++attempt) {
    if (attempt > 1) {
      const auto delay = retry.backoff_before(attempt);
      if (retry.sleep) {
        retry.sleep(delay);
      } else {
        std::this_thread::sleep_for(delay);
      }
    }
    out.attempts = attempt;
    auto result = backend.complete(request);
    if (result.ok()) {
      out.score.raw_response = *result.content;
      out.score.value = parse_score(out.score.raw_response);
      if (!out.score.value) {
        out.diagnostic = "reply contains no in-range integer";
      }
      return out;
    }
    switch (result.failure) {
      case FailureKind::Auth:
        throw AuthError(fmt::format("{}: authentication failed (HTTP {}): {}", backend.name(),
                                    result.http_status, result.diagnostic));
      case FailureKind::Permanent:
        out.diagnostic = fmt::format("non-retryable failure (HTTP {}): {}", result.http_status,
                                     result.diagnostic);
        out.failed = true;
        return out;
      case FailureKind::Transient:
        out.diagnostic = fmt::format("attempt {}/{} failed (HTTP {}): {}", attempt, attempts,
                                     result.http_status, result.diagnostic);
        break;
    }
  }
  out.failed = true;
  return out;
}

}  // namespace laca
