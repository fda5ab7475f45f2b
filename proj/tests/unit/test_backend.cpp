#include <gtest/gtest.h>

#include <cstdlib>
#include <json.hpp>

#include "laca/backend.hpp"
#include "laca/error.hpp"
#include "laca/mock_backend.hpp"
#include "laca/openai_backend.hpp"
#include "stub_server.hpp"

using namespace laca;
using laca::testing::completion_body;
using laca::testing::StubServer;

namespace {

Chunk sample_chunk() {
  Chunk c;
  c.transcript_id = "fox-001";
  c.index = 2;
  c.text = "Joe Biden spoke in Delaware.";
  return c;
}

// Scripted in-process backend.
class ScriptedBackend final : public ChatBackend {
 public:
  explicit ScriptedBackend(std::vector<ChatResult> script) : script_(std::move(script)) {}
  ChatResult complete(const ChatRequest& r) override {
    last = r;
    const auto i = std::min(calls++, script_.size() - 1);
    return script_[i];
  }
  std::string_view name() const override { return "scripted"; }
  std::size_t calls = 0;
  ChatRequest last;

 private:
  std::vector<ChatResult> script_;
};

RetryPolicy instant(int attempts, std::vector<std::chrono::milliseconds>* slept = nullptr) {
  RetryPolicy p;
  p.max_attempts = attempts;
  p.sleep = [slept](std::chrono::milliseconds d) {
    if (slept) slept->push_back(d);
  };
  return p;
}

const CoderConfig& dd() {
  static const auto cs = builtin_configs("gpt-4o-2024-08-06", "ft:gpt-4o:x");
  return find_config(cs, CoderId::DD);
}

}  // namespace

TEST(Retry, BackoffIsExponential) {
  RetryPolicy p;
  EXPECT_EQ(p.backoff_before(2).count(), 500);
  EXPECT_EQ(p.backoff_before(3).count(), 1000);
  EXPECT_EQ(p.backoff_before(4).count(), 2000);
}

TEST(CodeChunk, RetriesTransientThenSucceeds) {
  ScriptedBackend b({ChatResult::error(FailureKind::Transient, 503, "busy"),
                     ChatResult::error(FailureKind::Transient, 0, "reset"), ChatResult::success("-1")});
  std::vector<std::chrono::milliseconds> slept;
  const auto out = code_chunk(b, dd(), sample_chunk(), Source::FoxNews, Candidate::Trump, instant(3, &slept));
  EXPECT_EQ(out.score.value, -1);
  EXPECT_EQ(out.attempts, 3);
  EXPECT_FALSE(out.failed);
  ASSERT_EQ(slept.size(), 2u);
  EXPECT_EQ(slept[0].count(), 500);
  EXPECT_EQ(slept[1].count(), 1000);
  EXPECT_EQ(b.last.context.transcript_id, "fox-001");
  EXPECT_EQ(b.last.context.chunk_index, 2u);
  EXPECT_EQ(b.last.context.persona, Persona::Democrat);
}

TEST(CodeChunk, ExhaustionIsMissingNotRetriedForever) {
  ScriptedBackend b({ChatResult::error(FailureKind::Transient, 500, "down")});
  const auto out = code_chunk(b, dd(), sample_chunk(), Source::MSNBC, Candidate::Biden, instant(3));
  EXPECT_TRUE(out.failed);
  EXPECT_FALSE(out.score.value.has_value());
  EXPECT_EQ(b.calls, 3u);
}

TEST(CodeChunk, PermanentAndParseFailuresAreNotRetried) {
  ScriptedBackend perm({ChatResult::error(FailureKind::Permanent, 400, "bad request")});
  const auto a = code_chunk(perm, dd(), sample_chunk(), Source::MSNBC, Candidate::Biden, instant(3));
  EXPECT_TRUE(a.failed);
  EXPECT_EQ(perm.calls, 1u);

  ScriptedBackend junk({ChatResult::success("I cannot rate this.")});
  const auto b = code_chunk(junk, dd(), sample_chunk(), Source::MSNBC, Candidate::Biden, instant(3));
  EXPECT_FALSE(b.failed);
  EXPECT_FALSE(b.score.value.has_value());
  EXPECT_EQ(b.score.raw_response, "I cannot rate this.");
  EXPECT_EQ(junk.calls, 1u);
}

TEST(CodeChunk, AuthFailureThrows) {
  ScriptedBackend b({ChatResult::error(FailureKind::Auth, 401, "no key")});
  EXPECT_THROW(code_chunk(b, dd(), sample_chunk(), Source::MSNBC, Candidate::Biden, instant(3)), AuthError);
  EXPECT_EQ(b.calls, 1u);
}

TEST(Mock, DeterministicAndInRange) {
  MockBackend a(partisan_mock_params(), 99);
  MockBackend b(partisan_mock_params(), 99);
  MockBackend c(partisan_mock_params(), 100);
  int differ = 0;
  for (auto coder : kAllCoders) {
    for (std::size_t k = 0; k < 50; ++k) {
      RequestContext ctx{coder, persona_of(coder), Source::FoxNews, "t" + std::to_string(k), k % 3,
                         Candidate::Trump};
      const int s = a.score(ctx);
      EXPECT_GE(s, -2);
      EXPECT_LE(s, 2);
      EXPECT_EQ(s, b.score(ctx));
      differ += s != c.score(ctx);
    }
  }
  EXPECT_GT(differ, 0);
}

TEST(Mock, BiasShiftsMeans) {
  MockParams p;
  p.bias[{Persona::Republican, Source::FoxNews, Candidate::Trump}] = {1.5, 0.3};
  p.bias[{Persona::Democrat, Source::FoxNews, Candidate::Trump}] = {-1.5, 0.3};
  MockBackend m(p, 1);
  double rep = 0, dem = 0;
  for (int k = 0; k < 200; ++k) {
    rep += m.score({CoderId::DR, Persona::Republican, Source::FoxNews, std::to_string(k), 0, Candidate::Trump});
    dem += m.score({CoderId::DD, Persona::Democrat, Source::FoxNews, std::to_string(k), 0, Candidate::Trump});
  }
  EXPECT_GT(rep / 200, 1.0);
  EXPECT_LT(dem / 200, -1.0);
}

TEST(Mock, RejectsBadParams) {
  MockParams p;
  p.unit_correlation = 1.5;
  EXPECT_THROW(p.validate(), ConfigError);
  MockParams q;
  q.bias[{Persona::None, Source::MSNBC, Candidate::Biden}] = {0.0, -1.0};
  EXPECT_THROW(q.validate(), ConfigError);
}

TEST(Mock, CompleteReturnsTheNumber) {
  MockBackend m(MockParams{}, 5);
  auto req = make_chat_request(dd(), render_prompt(dd(), sample_chunk(), Candidate::Biden),
                               {CoderId::DD, Persona::Democrat, Source::MSNBC, "x", 0, Candidate::Biden});
  const auto r = m.complete(req);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(parse_score(*r.content), m.score(req.context));
  EXPECT_EQ(m.calls(), 1u);
}

TEST(Wire, BodyIsExact) {
  ChatRequest r;
  r.model = "gpt-4o-2024-08-06";
  r.messages = {{"system", "sys \"q\""}, {"user", "line1\nline2"}};
  EXPECT_EQ(chat_request_body(r),
            R"({"model":"gpt-4o-2024-08-06","messages":[{"role":"system","content":"sys \"q\""},)"
            R"({"role":"user","content":"line1\nline2"}],"temperature":0.0,"max_tokens":10})");
}

TEST(Wire, ParsesResponses) {
  EXPECT_EQ(parse_chat_response(completion_body("1")), "1");
  EXPECT_THROW(parse_chat_response("{}"), BackendError);
  EXPECT_THROW(parse_chat_response("not json"), BackendError);
}

TEST(Wire, AgainstStubServer) {
  StubServer server;
  server.script({{200, completion_body("1")}, {200, completion_body("-2")}, {200, completion_body("garbage")}});
  OpenAICompatibleBackend backend({server.url(), "sk-test", std::chrono::seconds(5)});
  const auto chunk = sample_chunk();
  const auto a = code_chunk(backend, dd(), chunk, Source::FoxNews, Candidate::Biden, instant(1));
  const auto b = code_chunk(backend, dd(), chunk, Source::FoxNews, Candidate::Trump, instant(1));
  const auto c = code_chunk(backend, dd(), chunk, Source::FoxNews, Candidate::Trump, instant(1));
  EXPECT_EQ(a.score.value, 1);
  EXPECT_EQ(b.score.value, -2);
  EXPECT_FALSE(c.score.value.has_value());
  EXPECT_FALSE(c.failed);

  const auto reqs = server.requests();
  ASSERT_EQ(reqs.size(), 3u);
  EXPECT_EQ(reqs[0].path, "/v1/chat/completions");
  EXPECT_EQ(reqs[0].authorization, "Bearer sk-test");
  EXPECT_EQ(reqs[0].content_type, "application/json");
  const auto expected = make_chat_request(dd(), render_prompt(dd(), chunk, Candidate::Biden), {});
  EXPECT_EQ(reqs[0].body, chat_request_body(expected));
  const auto j = nlohmann::json::parse(reqs[0].body);
  EXPECT_EQ(j.at("temperature").get<double>(), 0.0);
  EXPECT_EQ(j.at("max_tokens").get<int>(), 10);
  EXPECT_EQ(j.at("model"), "gpt-4o-2024-08-06");
  EXPECT_EQ(j.at("messages").size(), 2u);
}

TEST(Wire, StatusMapping) {
  StubServer server;
  OpenAICompatibleBackend backend({server.url() + "/proxy", "k", std::chrono::seconds(5)});
  EXPECT_EQ(backend.endpoint_path(), "/proxy/v1/chat/completions");
  ChatRequest r;
  r.model = "m";
  r.messages = {{"user", "hi"}};
  auto status_of = [&](int status) {
    server.script({{status, "{}"}});
    return backend.complete(r);
  };
  EXPECT_EQ(status_of(401).failure, FailureKind::Auth);
  EXPECT_EQ(status_of(403).failure, FailureKind::Auth);
  EXPECT_EQ(status_of(429).failure, FailureKind::Transient);
  EXPECT_EQ(status_of(503).failure, FailureKind::Transient);
  EXPECT_EQ(status_of(400).failure, FailureKind::Permanent);
  EXPECT_EQ(server.requests().back().path, "/proxy/v1/chat/completions");
}

TEST(Wire, RetriesServerErrorsAndStopsOnAuth) {
  StubServer server;
  server.script({{502, "{}"}, {500, "{}"}, {200, completion_body("2")}});
  OpenAICompatibleBackend backend({server.url(), "k", std::chrono::seconds(5)});
  const auto out = code_chunk(backend, dd(), sample_chunk(), Source::MSNBC, Candidate::Biden, instant(3));
  EXPECT_EQ(out.score.value, 2);
  EXPECT_EQ(out.attempts, 3);

  server.script({{401, R"({"error":"bad key"})"}});
  EXPECT_THROW(code_chunk(backend, dd(), sample_chunk(), Source::MSNBC, Candidate::Biden, instant(3)), AuthError);
}

TEST(Wire, TransportErrorIsTransient) {
  OpenAICompatibleBackend backend({"http://127.0.0.1:1", "k", std::chrono::seconds(1)});
  ChatRequest r;
  r.model = "m";
  const auto res = backend.complete(r);
  EXPECT_FALSE(res.ok());
  EXPECT_EQ(res.failure, FailureKind::Transient);
}

TEST(Wire, ApiKeyFromEnvironment) {
  ::unsetenv(kApiKeyEnv);
  EXPECT_THROW(api_key_from_env(), AuthError);
  ::setenv(kApiKeyEnv, "sk-env", 1);
  EXPECT_EQ(api_key_from_env(), "sk-env");
  ::unsetenv(kApiKeyEnv);
}
