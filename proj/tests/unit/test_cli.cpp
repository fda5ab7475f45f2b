#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <sys/wait.h>

#include <json.hpp>

#include "temp_dir.hpp"

using laca::testing::slurp;
using laca::testing::spit;
using laca::testing::TempDir;

namespace {

const std::filesystem::path kFixture = std::filesystem::path(LACA_DATA_DIR) / "fixture";

struct Outcome {
  int code = -1;
  std::string output;  // stdout and stderr
};

Outcome run_laca(const std::string& args) {
  const std::string cmd = std::string("env -u LACA_API_KEY '") + LACA_CLI_PATH + "' " + args + " 2>&1";
  Outcome o;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return o;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) o.output.append(buf.data(), n);
  const int status = ::pclose(pipe);
  o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return o;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST(Cli, HelpAndUsageErrors) {
  EXPECT_EQ(run_laca("--help").code, 0);
  EXPECT_EQ(run_laca("--version").code, 0);
  EXPECT_EQ(run_laca("").code, 2);
  EXPECT_EQ(run_laca("frobnicate").code, 2);
  EXPECT_EQ(run_laca("code --fox x").code, 2);
}

TEST(Cli, ValidateListsEveryViolation) {
  const auto ok = run_laca("validate --config " + q(kFixture / "project.json"));
  EXPECT_EQ(ok.code, 0) << ok.output;
  EXPECT_NE(ok.output.find("ok: backend mock"), std::string::npos);

  TempDir dir;
  spit(dir / "bad.json", R"({"corpus": {"fox": "nope.jsonl"}, "seeds": {"sample": 1}, "output_dir": "o"})");
  const auto bad = run_laca("validate --config " + q(dir / "bad.json"));
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.output.find("corpus.fox"), std::string::npos);
  EXPECT_NE(bad.output.find("corpus.msnbc"), std::string::npos);
  EXPECT_NE(bad.output.find("seeds.mock"), std::string::npos);

  // Flags override the file.
  const auto over = run_laca("validate --config " + q(dir / "bad.json") + " --backend sideways");
  EXPECT_EQ(over.code, 2);
}

TEST(Cli, RunAllOnFixture) {
  TempDir dir;
  const auto r = run_laca("run-all --config " + q(kFixture / "project.json") + " --output-dir " + q(dir / "out"));
  ASSERT_EQ(r.code, 0) << r.output;
  EXPECT_NE(r.output.find("[laca] code"), std::string::npos);
  const auto report = nlohmann::json::parse(slurp(dir / "out" / "report" / "report.json"));
  EXPECT_EQ(report.at("reliability").at("rows").size(), 15u);
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "train.jsonl"));
}

TEST(Cli, StagewiseCommandsAgreeWithRunAll) {
  TempDir dir;
  auto run = [](const std::string& args) {
    const auto r = run_laca(args);
    EXPECT_EQ(r.code, 0) << args << "\n" << r.output;
    return r;
  };
  run("sample --fox " + q(kFixture / "fox.jsonl") + " --msnbc " + q(kFixture / "msnbc.jsonl") +
      " --from 2020-06-01 --to 2020-10-31 --terms 'Joe Biden' 'Donald Trump' --wc-min 3000 --wc-max 3400"
      " --equalize --seed 242 --out " + q(dir / "sample"));
  run("code --fox " + q(dir / "sample" / "fox.jsonl") + " --msnbc " + q(dir / "sample" / "msnbc.jsonl") +
      " --out " + q(dir / "scores.csv") + " --finetuned-model ft:x --seed 7");
  run("aggregate --scores " + q(dir / "scores.csv") + " --out " + q(dir / "t.csv"));
  run("subset --scores " + q(dir / "scores.csv") + " --out " + q(dir / "s.csv") +
      " --n 80 --per-source 40 --seed 224");
  const auto stats = run("stats --scores " + q(dir / "scores.csv") + " --all-units");
  EXPECT_NE(stats.output.find("Intercoder reliability"), std::string::npos);
  run("report --scores " + q(dir / "scores.csv") + " --out " + q(dir / "report") +
      " --subset-total 80 --subset-per-source 40 --subset-seed 224");

  run("run-all --config " + q(kFixture / "project.json") + " --output-dir " + q(dir / "all"));
  EXPECT_EQ(slurp(dir / "scores.csv"), slurp(dir / "all" / "scores.csv"));
  EXPECT_EQ(slurp(dir / "t.csv"), slurp(dir / "all" / "transcript_scores.csv"));
  EXPECT_EQ(slurp(dir / "s.csv"), slurp(dir / "all" / "reliability_subset.csv"));
  const auto a = nlohmann::json::parse(slurp(dir / "report" / "report.json"));
  const auto b = nlohmann::json::parse(slurp(dir / "all" / "report" / "report.json"));
  EXPECT_EQ(a.at("reliability"), b.at("reliability"));
  EXPECT_EQ(a.at("congruence"), b.at("congruence"));
}

TEST(Cli, ExitCodesByFailure) {
  TempDir dir;
  // Unreadable input is a storage failure.
  EXPECT_EQ(run_laca("ingest --input " + q(dir / "absent.jsonl") + " --source fox").code, 4);
  // Malformed data is a general failure.
  spit(dir / "junk.jsonl", "not json\n");
  EXPECT_EQ(run_laca("ingest --input " + q(dir / "junk.jsonl") + " --source fox").code, 1);
  // A live backend without credentials fails as a backend error.
  spit(dir / "t.jsonl", R"({"id":"a","source":"FoxNews","date":"2020-07-01","text":"Joe Biden and Donald Trump"})" "\n");
  spit(dir / "m.jsonl", R"({"id":"b","source":"MSNBC","date":"2020-07-01","text":"Joe Biden and Donald Trump"})" "\n");
  const auto live = run_laca("code --fox " + q(dir / "t.jsonl") + " --msnbc " + q(dir / "m.jsonl") +
                         " --out " + q(dir / "s.csv") +
                         " --finetuned-model ft:x --backend live --base-url http://127.0.0.1:1");
  EXPECT_EQ(live.code, 3) << live.output;

  spit(dir / "survey.csv", "id,gender\n");
  EXPECT_EQ(run_laca("finetune-prep --input " + q(dir / "survey.csv") + " --out " + q(dir / "o.jsonl")).code, 1);
  const auto ok = run_laca("finetune-prep --input " + q(kFixture / "anes_sample.csv") + " --out " +
                       q(dir / "train.jsonl") + " --special drop");
  EXPECT_EQ(ok.code, 0) << ok.output;
}
