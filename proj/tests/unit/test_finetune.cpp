#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include <json.hpp>

#include "laca/error.hpp"
#include "laca/finetune.hpp"
#include "temp_dir.hpp"

using namespace laca;
using laca::testing::slurp;
using laca::testing::spit;
using laca::testing::TempDir;

namespace {

SurveyRecord record(std::string id, std::array<int, 10> codes) {
  SurveyRecord r;
  r.id = std::move(id);
  r.codes = codes;
  return r;
}

const std::string kHeader =
    "id,gender,age,race_ethnicity,education,income,ideology_self,ideology_dem_party,"
    "ideology_rep_party,trust_fox,trust_msnbc\n";

}  // namespace

TEST(Codebook, DecodesLabels) {
  EXPECT_EQ(decode(SurveyField::Gender, 2), "Female");
  EXPECT_EQ(decode(SurveyField::Gender, 0), "Unknown");
  EXPECT_EQ(decode(SurveyField::Age, 47), "47");
  EXPECT_EQ(decode(SurveyField::Education, 4), "Bachelor's degree");
  EXPECT_EQ(decode(SurveyField::Income, 18), "$200,000 or more");
  EXPECT_EQ(decode(SurveyField::IdeologySelf, 4), "Neither liberal nor conservative");
  EXPECT_EQ(decode(SurveyField::TrustFox, 77), "Don't know");
  EXPECT_EQ(decode(SurveyField::TrustMsnbc, -1), "Inapplicable (legitimate skip)");
  EXPECT_EQ(decode(SurveyField::IdeologyRepParty, 99), "Refused");
}

TEST(Codebook, RejectsCodesOutsideTheDomain) {
  EXPECT_THROW(decode(SurveyField::Education, 9), InputError);
  EXPECT_THROW(decode(SurveyField::Gender, 3), InputError);
  EXPECT_THROW(decode(SurveyField::Age, -1), InputError);
  EXPECT_THROW(decode(SurveyField::Age, kMaxAge + 1), InputError);
  EXPECT_THROW(decode(SurveyField::Income, 77), InputError);  // no special codes on demographics
  EXPECT_THROW(decode(SurveyField::TrustFox, 6), InputError);
  EXPECT_TRUE(is_special_code(SurveyField::TrustFox, 98));
  EXPECT_FALSE(is_special_code(SurveyField::Age, 98));
}

TEST(Codebook, ColumnNamesRoundTrip) {
  for (auto f : kSurveyFields) EXPECT_EQ(parse_survey_field(to_string(f)), f);
  EXPECT_THROW(parse_survey_field("party"), InputError);
}

TEST(Render, OneTurnPerVariable) {
  const auto r = record("a", {2, 24, 2, 4, 9, 2, 3, 6, 1, 4});
  const auto ex = render(r);
  ASSERT_EQ(ex.messages.size(), 20u);
  for (std::size_t i = 0; i < kSurveyFields.size(); ++i) {
    EXPECT_EQ(ex.messages[2 * i].role, "user");
    EXPECT_EQ(ex.messages[2 * i].content, question_text(kSurveyFields[i]));
    EXPECT_EQ(ex.messages[2 * i + 1].role, "assistant");
    EXPECT_EQ(ex.messages[2 * i + 1].content, decode(kSurveyFields[i], r.codes[i]));
  }
  EXPECT_EQ(ex.messages[3].content, "24");
}

TEST(Render, SpecialCodeHandling) {
  const auto r = record("a", {1, 57, 1, 2, 13, 77, -7, 7, 98, 1});
  EXPECT_EQ(render(r, SpecialCodes::Keep).messages.size(), 20u);
  const auto dropped = render(r, SpecialCodes::Drop);
  ASSERT_EQ(dropped.messages.size(), 14u);
  for (const auto& m : dropped.messages) {
    EXPECT_NE(m.content, "Don't know");
    EXPECT_NE(m.content, question_text(SurveyField::TrustFox));
  }
  EXPECT_THROW(render(record("b", {1, 57, 1, 9, 13, 1, 1, 1, 1, 1})), InputError);
}

TEST(Render, DeterministicAndInjective) {
  const auto a = record("a", {2, 24, 2, 4, 9, 2, 3, 6, 1, 4});
  auto b = a;
  EXPECT_EQ(to_jsonl(render(a)), to_jsonl(render(b)));
  std::set<std::string> lines;
  for (auto f : kSurveyFields) {
    b = a;
    b.code(f) = f == SurveyField::Age ? 25 : (f == SurveyField::Gender ? 1 : a.code(f) + 1);
    lines.insert(to_jsonl(render(b)));
  }
  lines.insert(to_jsonl(render(a)));
  EXPECT_EQ(lines.size(), 11u);
}

TEST(Render, JsonlShape) {
  const auto line = to_jsonl(render(record("a", {2, 24, 2, 4, 9, 2, 3, 6, 1, 4})));
  EXPECT_EQ(line.find('\n'), std::string::npos);
  const auto j = nlohmann::ordered_json::parse(line);
  ASSERT_EQ(j.size(), 1u);
  EXPECT_EQ(j.at("messages").size(), 20u);
  EXPECT_EQ(j["messages"][1]["content"], "Female");
  EXPECT_EQ(j["messages"][0].begin().key(), "role");
}

TEST(SurveyCsv, ColumnsInAnyOrder) {
  std::istringstream in(
      "trust_msnbc,trust_fox,ideology_rep_party,ideology_dem_party,ideology_self,income,"
      "education,race_ethnicity,age,gender,id\n4,1,6,3,2,9,4,2,24,2,r1\n");
  const auto recs = read_survey_csv(in);
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0].id, "r1");
  EXPECT_EQ(recs[0].codes, (std::array<int, 10>{2, 24, 2, 4, 9, 2, 3, 6, 1, 4}));
}

TEST(SurveyCsv, ErrorsNameTheLine) {
  auto fails = [](const std::string& text, const std::string& needle) {
    std::istringstream in(text);
    try {
      read_survey_csv(in, "s.csv");
    } catch (const InputError& e) {
      EXPECT_NE(std::string(e.what()).find(needle), std::string::npos) << e.what();
      return;
    }
    ADD_FAILURE() << "no error for " << needle;
  };
  fails("id,gender\n", "missing column");
  fails(kHeader + "a,2,24,2,4,9,2,3,6,1,4\na,2,24,2,4,9,2,3,6,1,4\n", "s.csv:3: duplicate id");
  fails(kHeader + "a,2,x,2,4,9,2,3,6,1,4\n", "s.csv:2: age is not an integer");
  fails(kHeader + "a,2,24,2,9,9,2,3,6,1,4\n", "s.csv:2:");
  fails(kHeader + "a,2,24\n", "expected 11 fields");
}

TEST(TrainingFile, FixtureProducesOneLinePerRecord) {
  TempDir dir;
  const auto recs = read_survey_csv(std::filesystem::path(LACA_DATA_DIR) / "fixture" / "anes_sample.csv");
  ASSERT_EQ(recs.size(), 10u);
  const auto out = dir.path() / "train.jsonl";
  const auto summary = write_training_file(recs, out);
  EXPECT_EQ(summary.records, 10u);
  EXPECT_EQ(summary.lines, 10u);
  const auto text = slurp(out);
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 10);
  EXPECT_EQ(estimate_tokens(out), summary.estimated_tokens);

  auto meta_path = out;
  meta_path += ".meta.json";
  const auto meta = nlohmann::json::parse(slurp(meta_path));
  EXPECT_EQ(meta.at("template_version"), kFineTuneTemplateVersion);
  EXPECT_EQ(meta.at("epochs"), 3);
  EXPECT_EQ(meta.at("batch_size"), 11);
  EXPECT_EQ(meta.at("estimated_tokens"), summary.estimated_tokens);

  // Rewriting gives identical bytes.
  write_training_file(recs, out);
  EXPECT_EQ(slurp(out), text);
}

TEST(TrainingFile, TokenEstimates) {
  TempDir dir;
  spit(dir / "empty.jsonl", "");
  EXPECT_EQ(estimate_tokens(dir / "empty.jsonl"), 0u);
  std::string thirty;
  for (int i = 0; i < 30; ++i) thirty += i ? " word" : "word";
  TrainingExample ex{{{"user", thirty}}};
  EXPECT_EQ(estimate_tokens(ex), 40u);
  spit(dir / "one.jsonl", to_jsonl(ex) + "\n");
  EXPECT_EQ(estimate_tokens(dir / "one.jsonl"), 40u);
  spit(dir / "bad.jsonl", "{not json\n");
  EXPECT_THROW(estimate_tokens(dir / "bad.jsonl"), InputError);
  EXPECT_THROW(estimate_tokens(dir / "absent.jsonl"), StorageError);
}
