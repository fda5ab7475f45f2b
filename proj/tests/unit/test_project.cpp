#include <gtest/gtest.h>

#include <algorithm>

#include <json.hpp>

#include "laca/error.hpp"
#include "laca/project.hpp"
#include "temp_dir.hpp"

using namespace laca;
using laca::testing::slurp;
using laca::testing::spit;
using laca::testing::TempDir;

namespace {

const std::filesystem::path kFixture = std::filesystem::path(LACA_DATA_DIR) / "fixture";

ProjectConfig fixture_config(const std::filesystem::path& out) {
  auto c = load_project_config(kFixture / "project.json");
  c.output_dir = out;
  return c;
}

std::vector<std::string> violations_of(const std::string& text, const std::filesystem::path& base) {
  try {
    require_valid(parse_project_config(text, base));
  } catch (const ConfigValidationError& e) {
    return e.violations();
  }
  return {};
}

bool mentions(const std::vector<std::string>& v, std::string_view needle) {
  return std::any_of(v.begin(), v.end(), [&](const auto& s) { return s.find(needle) != std::string::npos; });
}

std::string quiet_log;
RunAllOptions quiet() {
  return {[](std::string_view line) { quiet_log.append(line).push_back('\n'); }};
}

}  // namespace

TEST(Config, FixtureIsValid) {
  const auto c = load_project_config(kFixture / "project.json");
  EXPECT_TRUE(c.violations().empty());
  EXPECT_EQ(c.fox_corpus, kFixture / "fox.jsonl");
  EXPECT_EQ(c.backend.kind, BackendKind::Mock);
  EXPECT_EQ(c.seeds.mock, 7u);
  ASSERT_TRUE(c.reliability.has_value());
  EXPECT_EQ(c.reliability->n_total, 80u);
  EXPECT_DOUBLE_EQ(c.threshold, 0.66);
  ASSERT_TRUE(c.finetune.has_value());
}

TEST(Config, MinimalConfigAndDefaults) {
  TempDir dir;
  spit(dir / "f.jsonl", "");
  spit(dir / "m.jsonl", "");
  const auto c = parse_project_config(R"({
    "corpus": {"fox": "f.jsonl", "msnbc": "m.jsonl"},
    "models": {"finetuned": "ft:x"},
    "seeds": {"sample": 1, "mock": 2, "subset": 3},
    "output_dir": "out"})",
                                      dir.path());
  EXPECT_TRUE(c.violations().empty()) << c.violations().front();
  EXPECT_EQ(c.output_dir, dir / "out");
  EXPECT_EQ(c.default_model, "gpt-4o-2024-08-06");
  EXPECT_EQ(c.reliability->n_total, 224u);
  EXPECT_EQ(c.reliability->per_source, 112u);
  EXPECT_EQ(c.level, AnalysisLevel::Transcript);
}

TEST(Config, MockWithoutSeedIsNamed) {
  TempDir dir;
  spit(dir / "f.jsonl", "");
  const auto v = violations_of(R"({
    "corpus": {"fox": "f.jsonl", "msnbc": "f.jsonl"},
    "models": {"finetuned": "ft:x"},
    "seeds": {"sample": 1, "subset": 3},
    "output_dir": "out"})",
                               dir.path());
  ASSERT_EQ(v.size(), 1u);
  EXPECT_NE(v[0].find("seeds.mock"), std::string::npos);
}

TEST(Config, EveryViolationIsReported) {
  TempDir dir;
  const auto v = violations_of(R"({
    "corpus": {"fox": "absent.jsonl"},
    "seeds": {"sample": 1, "mock": 2, "subset": 3},
    "reliability": {"n_total": 10, "per_source": 4},
    "report": {"threshold": 2},
    "output_dir": "out"})",
                               dir.path());
  EXPECT_TRUE(mentions(v, "corpus.fox: file not found"));
  EXPECT_TRUE(mentions(v, "corpus.msnbc: required"));
  EXPECT_TRUE(mentions(v, "models.finetuned"));
  EXPECT_TRUE(mentions(v, "reliability: n_total"));
  EXPECT_TRUE(mentions(v, "report.threshold"));
  EXPECT_EQ(v.size(), 5u);
}

TEST(Config, SchemaErrorsAreCollected) {
  try {
    parse_project_config(R"({"colour": 1, "seeds": {"sample": "x"}, "report": {"level": "unit"}})", ".");
    FAIL() << "expected a violation";
  } catch (const ConfigValidationError& e) {
    EXPECT_TRUE(mentions(e.violations(), "colour: unknown field"));
    EXPECT_TRUE(mentions(e.violations(), "seeds.sample"));
    EXPECT_TRUE(mentions(e.violations(), "report.level"));
  }
  EXPECT_THROW(parse_project_config("{", "."), ConfigError);
  EXPECT_THROW(load_project_config("/nonexistent/project.json"), ConfigError);
}

TEST(Config, AllUnitsReliability) {
  TempDir dir;
  spit(dir / "f.jsonl", "");
  const auto c = parse_project_config(R"({
    "corpus": {"fox": "f.jsonl", "msnbc": "f.jsonl"},
    "models": {"finetuned": "ft:x"},
    "seeds": {"sample": 1, "mock": 2},
    "reliability": "all",
    "report": {"threshold": "reliable"},
    "output_dir": "out"})",
                                      dir.path());
  EXPECT_FALSE(c.reliability.has_value());
  EXPECT_DOUBLE_EQ(c.threshold, 0.80);
  EXPECT_TRUE(c.violations().empty());
}

TEST(ExitCodes, ByErrorType) {
  EXPECT_EQ(exit_code_for(ConfigError("x")), kExitConfig);
  EXPECT_EQ(exit_code_for(ConfigValidationError({"a"})), kExitConfig);
  EXPECT_EQ(exit_code_for(BackendError("x")), kExitBackend);
  EXPECT_EQ(exit_code_for(AuthError("x")), kExitBackend);
  EXPECT_EQ(exit_code_for(StorageError("x")), kExitStorage);
  EXPECT_EQ(exit_code_for(InputError("x")), kExitFailure);
  EXPECT_EQ(exit_code_for(std::runtime_error("x")), kExitFailure);
}

TEST(RunAll, FixtureEndToEnd) {
  TempDir dir;
  const auto c = fixture_config(dir / "out");
  const auto r = run_all(c, quiet());

  std::vector<std::string> stages;
  for (const auto& t : r.timings) stages.push_back(t.stage);
  EXPECT_EQ(stages, (std::vector<std::string>{"ingest", "filter", "sample", "code", "aggregate", "subset",
                                              "stats", "report", "finetune"}));
  // 10 per source after equalization, 3 chunks each, 6 coders, 2 candidates.
  EXPECT_EQ(r.coding.scores.rows.size(), 20u * 3u * 6u * 2u);
  EXPECT_EQ(r.report.reliability.units, 80u);
  for (const auto& name : {"scores.csv", "scores.csv.meta.json", "transcript_scores.csv",
                           "reliability_subset.csv", "report/report.txt", "report/report.json",
                           "report/figures.svg", "train.jsonl", "train.jsonl.meta.json"}) {
    EXPECT_TRUE(std::filesystem::exists(dir / "out" / name)) << name;
  }
  const auto ts = slurp(dir / "out" / "transcript_scores.csv");
  EXPECT_EQ(std::count(ts.begin(), ts.end(), '\n'), 1 + 20 * 6 * 2);

  const auto first = slurp(dir / "out" / "report" / "report.json");
  run_all(c, quiet());
  EXPECT_EQ(slurp(dir / "out" / "report" / "report.json"), first);
}

TEST(RunAll, ResumeReusesRows) {
  TempDir dir;
  auto c = fixture_config(dir / "out");
  const auto first = run_all(c, quiet());
  c.resume = true;
  const auto second = run_all(c, quiet());
  EXPECT_EQ(second.coding.written, 0u);
  EXPECT_EQ(second.coding.skipped, first.coding.scores.rows.size());
  EXPECT_EQ(to_json(second.report), to_json(first.report));
}

TEST(RunAll, InvalidConfigWritesNothing) {
  TempDir dir;
  auto c = fixture_config(dir / "out");
  c.seeds.mock.reset();
  EXPECT_THROW(run_all(c, quiet()), ConfigValidationError);
  EXPECT_FALSE(std::filesystem::exists(dir / "out"));
}

TEST(RunAll, StageErrorsKeepTheirType) {
  TempDir dir;
  spit(dir / "fox.jsonl", slurp(kFixture / "fox.jsonl") + "not json\n");
  auto c = fixture_config(dir / "out");
  c.fox_corpus = dir / "fox.jsonl";
  try {
    run_all(c, quiet());
    FAIL() << "expected an ingest error";
  } catch (const InputError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("stage ingest:", 0), 0u) << e.what();
  }

  c = fixture_config(dir / "out2");
  c.reliability = ReliabilitySampling{2000, 1000, 0};
  try {
    run_all(c, quiet());
    FAIL() << "expected a subset error";
  } catch (const InputError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("stage subset:", 0), 0u) << e.what();
  }
}
