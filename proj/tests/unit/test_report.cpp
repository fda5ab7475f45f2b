#include <gtest/gtest.h>

#include <regex>

#include "laca/error.hpp"
#include "laca/mock_backend.hpp"
#include "laca/report.hpp"
#include "temp_dir.hpp"

using namespace laca;
using laca::testing::slurp;
using laca::testing::TempDir;

namespace {

// Every coder rates `n` transcripts per source in one chunk, with a value
// chosen by `f(coder, source, candidate, i)`.
template <typename F>
ScoreSet synthetic(std::size_t n, F f) {
  ScoreSet s;
  s.metadata.run_id = "run-test";
  s.metadata.prompt_hash = "0123456789abcdef";
  for (auto source : kAllSources) {
    for (std::size_t i = 0; i < n; ++i) {
      const std::string id = std::string(to_string(source)) + "-" + std::to_string(i);
      s.metadata.transcript_sources[id] = source;
      for (auto coder : kAllCoders) {
        for (auto cand : kAllCandidates) {
          const ScoreValue v = f(coder, source, cand, i);
          s.rows.push_back({coder, id, 0, cand, v, v ? std::to_string(*v) : "n/a"});
        }
      }
    }
  }
  return s;
}

ScoreSet mock_like(std::size_t n, std::uint64_t seed) {
  MockBackend mock(partisan_mock_params(), seed);
  return synthetic(n, [&](CoderId c, Source s, Candidate cand, std::size_t i) -> ScoreValue {
    return mock.score({c, persona_of(c), s, std::string(to_string(s)) + std::to_string(i), 0, cand});
  });
}

}  // namespace

TEST(Thresholds, NamedAndNumeric) {
  EXPECT_DOUBLE_EQ(parse_threshold("default"), 0.66);
  EXPECT_DOUBLE_EQ(parse_threshold("tentative"), 0.667);
  EXPECT_DOUBLE_EQ(parse_threshold("reliable"), 0.80);
  EXPECT_DOUBLE_EQ(parse_threshold("0.7"), 0.7);
  EXPECT_THROW(parse_threshold("high"), InputError);
  EXPECT_THROW(parse_threshold("1.5"), InputError);
  EXPECT_EQ(parse_analysis_level("chunk"), AnalysisLevel::Chunk);
  EXPECT_THROW(parse_analysis_level("unit"), InputError);
}

TEST(Report, StructureOfTables) {
  const auto scores = mock_like(30, 3);
  ReportOptions opts;
  const auto r = build_report(scores, opts);
  EXPECT_EQ(r.run_id, "run-test");
  EXPECT_EQ(r.sentiment.cells.size(), 6u * 2u * 2u);
  EXPECT_TRUE(r.sentiment.flags.empty());
  ASSERT_EQ(r.reliability.rows.size(), 15u);
  EXPECT_EQ(r.reliability.units, 2u * 30u * 2u);
  std::map<PairLabel, int> counts;
  for (const auto& row : r.reliability.rows) {
    ++counts[row.label];
    EXPECT_EQ(row.label, pair_label(row.a, row.b));
    EXPECT_EQ(row.acceptable, row.alpha && *row.alpha >= 0.66);
  }
  EXPECT_EQ(counts[PairLabel::CrossPartisan], 4);
  EXPECT_EQ(counts[PairLabel::Mixed], 8);
  ASSERT_EQ(r.congruence.cells.size(), 4u);
  EXPECT_EQ(r.congruence.cell(CoderId::FD, Source::MSNBC).congruence, Congruence::Congruent);
  EXPECT_EQ(r.congruence.cell(CoderId::FR, Source::FoxNews).congruence, Congruence::Congruent);
  EXPECT_EQ(r.congruence.cell(CoderId::FD, Source::FoxNews).congruence, Congruence::CrossCutting);
  EXPECT_EQ(r.congruence.cell(CoderId::FR, Source::MSNBC).congruence, Congruence::CrossCutting);
  for (const auto& c : r.congruence.cells) {
    EXPECT_EQ(c.sample.size(), 30u);
    ASSERT_TRUE(c.kde.has_value()) << c.note;
    EXPECT_EQ(c.kde->x.size(), 241u);
  }
  EXPECT_NEAR(r.congruence.congruent_percent, r.congruence.congruent_distance / 8 * 100, 1e-12);
  ASSERT_EQ(r.contrast_anova.size(), 2u);
  for (const auto& a : r.contrast_anova) {
    ASSERT_TRUE(a.anova.has_value()) << a.note;
    EXPECT_EQ(a.anova->df_between, 5);
    EXPECT_EQ(a.anova->df_within, 6 * 30 - 6);
    EXPECT_EQ(a.tukey->pairs.size(), 15u);
  }
}

TEST(Report, TranscriptAndChunkLevels) {
  // Two chunks per transcript: transcript level averages them.
  ScoreSet s;
  s.metadata.transcript_sources = {{"a", Source::FoxNews}};
  s.rows = {{CoderId::DZ, "a", 0, Candidate::Biden, 2, "2"},
            {CoderId::DZ, "a", 1, Candidate::Biden, -1, "-1"},
            {CoderId::DZ, "a", 0, Candidate::Trump, 0, "0"},
            {CoderId::DZ, "a", 1, Candidate::Trump, std::nullopt, "?"}};
  const auto t = analysis_data(s, AnalysisLevel::Transcript);
  EXPECT_EQ(t.scores.at({CoderId::DZ, Source::FoxNews, Candidate::Biden}), std::vector<double>{0.5});
  EXPECT_EQ(t.contrasts.at({CoderId::DZ, Source::FoxNews}), std::vector<double>{0.5});
  const auto c = analysis_data(s, AnalysisLevel::Chunk);
  EXPECT_EQ(c.scores.at({CoderId::DZ, Source::FoxNews, Candidate::Biden}), (std::vector<double>{2, -1}));
  EXPECT_EQ(c.contrasts.at({CoderId::DZ, Source::FoxNews}), std::vector<double>{2});

  const auto table = sentiment_table(t);
  EXPECT_EQ(table.cells.size(), 24u);
  EXPECT_EQ(table.flags.size(), 22u);
}

TEST(Report, CongruenceNeedsEveryCell) {
  std::map<std::pair<CoderId, Source>, std::vector<double>> contrasts{
      {{CoderId::FD, Source::FoxNews}, {0, 1}}, {{CoderId::FD, Source::MSNBC}, {2, 3}},
      {{CoderId::FR, Source::FoxNews}, {-2, -3}}};
  EXPECT_THROW(congruence_analysis(contrasts), InputError);
  contrasts[{CoderId::FR, Source::MSNBC}] = {0, 0};
  const auto c = congruence_analysis(contrasts);
  EXPECT_DOUBLE_EQ(c.congruent_distance, 5.0);
  EXPECT_DOUBLE_EQ(c.cross_cutting_distance, 0.5);
  EXPECT_DOUBLE_EQ(c.congruent_percent, 62.5);
  // a degenerate sample keeps its distance but has no curve
  EXPECT_FALSE(c.cell(CoderId::FR, Source::MSNBC).kde.has_value());
  EXPECT_FALSE(c.cell(CoderId::FR, Source::MSNBC).note.empty());
}

TEST(Report, IntersubjectivitySummary) {
  ReliabilityReport rel;
  rel.threshold = 0.66;
  auto add = [&](CoderId a, CoderId b, std::optional<double> alpha) {
    rel.rows.push_back({a, b, alpha, 10, pair_label(a, b), alpha && *alpha >= 0.66, ""});
  };
  add(CoderId::DD, CoderId::FD, 0.85);
  add(CoderId::DR, CoderId::FR, 0.68);
  add(CoderId::DD, CoderId::DR, 0.07);
  add(CoderId::FD, CoderId::FR, -0.18);
  add(CoderId::DZ, CoderId::FZ, std::nullopt);
  CongruenceAnalysis cong;
  cong.congruent_distance = 3.38;
  cong.cross_cutting_distance = 0.88;
  const auto s = intersubjectivity(rel, cong);
  EXPECT_EQ(s.level1.pairs_defined, 4u);
  EXPECT_EQ(s.level1.pairs_acceptable, 2u);
  EXPECT_EQ(s.level1.highest->alpha, 0.85);
  EXPECT_EQ(s.level1.lowest->b, CoderId::FR);
  EXPECT_DOUBLE_EQ(*s.level2.within_min, 0.68);
  EXPECT_DOUBLE_EQ(*s.level2.cross_max, 0.07);
  EXPECT_TRUE(s.level2.within_exceeds_cross);
  EXPECT_TRUE(s.level3.congruent_exceeds_cross);
}

TEST(Report, JsonRoundTripAndDeterminism) {
  const auto r = build_report(mock_like(25, 4), ReportOptions{});
  const auto text = to_json(r);
  EXPECT_EQ(text, to_json(build_report(mock_like(25, 4), ReportOptions{})));
  const auto back = report_from_json(text);
  EXPECT_EQ(to_json(back), text);
  EXPECT_EQ(back.reliability.rows.size(), 15u);
  EXPECT_EQ(back.congruence.cells[0].kde->density, r.congruence.cells[0].kde->density);
  EXPECT_THROW(report_from_json("{}"), InputError);
}

TEST(Report, EmitWritesEveryArtifact) {
  TempDir dir;
  const auto r = build_report(mock_like(20, 5), ReportOptions{});
  const auto paths = emit(r, dir.path() / "out");
  std::set<std::string> names;
  for (const auto& p : paths) {
    names.insert(p.filename().string());
    EXPECT_TRUE(std::filesystem::exists(p));
  }
  EXPECT_EQ(names, (std::set<std::string>{"report.txt", "table1.csv", "table2.csv", "contrast_kde.csv",
                                          "report.json", "figures.svg"}));

  const auto t1 = slurp(dir.path() / "out" / "table1.csv");
  EXPECT_EQ(t1.substr(0, t1.find('\n')), "coder,source,candidate,n,mean,sd");
  EXPECT_EQ(std::count(t1.begin(), t1.end(), '\n'), 25);
  const auto t2 = slurp(dir.path() / "out" / "table2.csv");
  EXPECT_EQ(t2.substr(0, t2.find('\n')), "coder_a,coder_b,alpha,n_units,label,acceptable");
  EXPECT_EQ(std::count(t2.begin(), t2.end(), '\n'), 16);
  const auto k = slurp(dir.path() / "out" / "contrast_kde.csv");
  EXPECT_EQ(k.substr(0, k.find('\n')), "x,FD_FoxNews,FD_MSNBC,FR_FoxNews,FR_MSNBC");
  EXPECT_EQ(std::count(k.begin(), k.end(), '\n'), 242);

  const auto svg = slurp(dir.path() / "out" / "figures.svg");
  const std::regex poly(R"re(<polyline data-cell="(\w+)" [^>]*points="([^"]*)")re");
  int curves = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), poly); it != std::sregex_iterator(); ++it) {
    const std::string pts = (*it)[2];
    EXPECT_EQ(std::count(pts.begin(), pts.end(), ' ') + 1, 241) << (*it)[1];
    ++curves;
  }
  EXPECT_EQ(curves, 4);

  const auto txt = slurp(dir.path() / "out" / "report.txt");
  EXPECT_NE(txt.find("Intercoder reliability"), std::string::npos);
  EXPECT_NE(txt.find("Level 3"), std::string::npos);
}

TEST(Report, ThresholdControlsAcceptability) {
  const auto scores = mock_like(20, 6);
  ReportOptions lo;
  lo.threshold = -1.0;
  ReportOptions hi;
  hi.threshold = 1.0;
  for (const auto& row : build_report(scores, lo).reliability.rows) EXPECT_TRUE(row.acceptable);
  for (const auto& row : build_report(scores, hi).reliability.rows) {
    EXPECT_EQ(row.acceptable, row.alpha && *row.alpha >= 1.0);
  }
}

TEST(Report, EmptyScoresAreAnError) {
  EXPECT_THROW(build_report(ScoreSet{}, ReportOptions{}), InputError);
}
