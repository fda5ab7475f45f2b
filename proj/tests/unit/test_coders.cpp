#include <gtest/gtest.h>

#include <regex>

#include "laca/coders.hpp"
#include "laca/error.hpp"

using namespace laca;

namespace {

Chunk sample_chunk(std::string text = "Joe Biden and Donald Trump debated tonight.") {
  Chunk c;
  c.transcript_id = "t1";
  c.index = 0;
  c.text = std::move(text);
  return c;
}

std::size_t occurrences(const std::string& hay, std::string_view needle) {
  std::size_t n = 0;
  for (auto pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST(Configs, SixBuiltins) {
  const auto cs = builtin_configs("base-model", "ft-model");
  ASSERT_EQ(cs.size(), 6u);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    EXPECT_EQ(cs[i].id, kAllCoders[i]);
    EXPECT_NO_THROW(cs[i].validate());
    EXPECT_EQ(cs[i].persona, persona_of(cs[i].id));
    EXPECT_EQ(cs[i].base_model, is_finetuned(cs[i].id) ? "ft-model" : "base-model");
    EXPECT_EQ(cs[i].decoding.temperature, 0.0);
    EXPECT_EQ(cs[i].decoding.max_response_tokens, 10);
  }
  EXPECT_EQ(find_config(cs, CoderId::DD).persona_text, kDemocratPersonaText);
  EXPECT_EQ(find_config(cs, CoderId::FR).persona_text, kRepublicanPersonaText);
  EXPECT_TRUE(find_config(cs, CoderId::FZ).persona_text.empty());
  EXPECT_THROW(builtin_configs("", "ft"), ConfigError);
}

TEST(Configs, ValidateCatchesInconsistency) {
  auto c = builtin_configs("m", "f")[0];
  c.persona_text = "someone";
  EXPECT_THROW(c.validate(), ConfigError);
  auto d = builtin_configs("m", "f")[1];
  d.persona_text.clear();
  EXPECT_THROW(d.validate(), ConfigError);
  auto e = builtin_configs("m", "f")[2];
  e.decoding.max_response_tokens = 0;
  EXPECT_THROW(e.validate(), ConfigError);
}

TEST(Prompt, PersonaGoesInSystemMessage) {
  const auto cs = builtin_configs("m", "f");
  const auto dz = render_prompt(find_config(cs, CoderId::DZ), sample_chunk(), Candidate::Biden);
  const auto dd = render_prompt(find_config(cs, CoderId::DD), sample_chunk(), Candidate::Biden);
  const auto fr = render_prompt(find_config(cs, CoderId::FR), sample_chunk(), Candidate::Biden);
  EXPECT_EQ(dz.system_text.find("Democrat"), std::string::npos);
  EXPECT_NE(dd.system_text.find(kDemocratPersonaText), std::string::npos);
  EXPECT_NE(fr.system_text.find(kRepublicanPersonaText), std::string::npos);
  EXPECT_EQ(dz.user_text, dd.user_text);
  EXPECT_EQ(dd.decoding.temperature, 0.0);
  EXPECT_EQ(dd.decoding.max_response_tokens, 10);
}

TEST(Prompt, InstructionNamesExactlyOneCandidate) {
  const auto cs = builtin_configs("m", "f");
  for (auto cand : kAllCandidates) {
    const auto p = render_prompt(cs[0], sample_chunk("no names here"), cand);
    EXPECT_EQ(p.candidate, cand);
    const auto other = cand == Candidate::Biden ? "Donald Trump" : "Joe Biden";
    EXPECT_EQ(occurrences(p.user_text, full_name(cand)), 1u);
    EXPECT_EQ(occurrences(p.user_text, other), 0u);
    EXPECT_NE(p.user_text.find("no names here"), std::string::npos);
  }
}

TEST(Prompt, TemplateHashIsStable) {
  const auto h = prompt_template_hash();
  EXPECT_EQ(h, prompt_template_hash());
  EXPECT_TRUE(std::regex_match(h, std::regex("[0-9a-f]{16}")));
}

struct ParseCase {
  const char* raw;
  std::optional<int> expected;
};

class ParseScore : public ::testing::TestWithParam<ParseCase> {};

TEST_P(ParseScore, Contract) {
  const auto& c = GetParam();
  EXPECT_EQ(parse_score(c.raw), c.expected) << "input: '" << c.raw << "'";
}

INSTANTIATE_TEST_SUITE_P(
    Replies, ParseScore,
    ::testing::Values(ParseCase{"1", 1}, ParseCase{"-2", -2}, ParseCase{"2", 2}, ParseCase{"0", 0},
                      ParseCase{"+1", 1}, ParseCase{" -1\n", -1}, ParseCase{"Score: -1", -1},
                      ParseCase{"1.0", 1}, ParseCase{"-2.00", -2}, ParseCase{"1.5", std::nullopt},
                      ParseCase{"3", std::nullopt}, ParseCase{"-3", std::nullopt},
                      ParseCase{"garbage", std::nullopt}, ParseCase{"", std::nullopt},
                      ParseCase{"COVID19 coverage: 1", 1}, ParseCase{"10", std::nullopt},
                      ParseCase{"neutral (0)", 0}, ParseCase{"2 or 1", 2}));
