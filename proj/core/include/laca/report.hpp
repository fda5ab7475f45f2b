#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "laca/pipeline.hpp"
#include "laca/stats/anova.hpp"
#include "laca/stats/kde.hpp"
#include "laca/stats/reliability.hpp"
#include "laca/stats/summary.hpp"
#include "laca/taxonomy.hpp"

namespace laca {

// Whether descriptive and contrast statistics use per-transcript means
// (after aggregation) or raw chunk responses.
enum class AnalysisLevel { Transcript, Chunk };

std::string_view to_string(AnalysisLevel level);
AnalysisLevel parse_analysis_level(std::string_view text);

inline constexpr double kDefaultAcceptability = 0.66;

// Named acceptability cutoffs: "default" 0.66, "tentative" 0.667,
// "reliable" 0.80. Plain numbers are accepted too.
double parse_threshold(std::string_view text);

// Observations grouped for analysis.
struct AnalysisData {
  AnalysisLevel level = AnalysisLevel::Transcript;
  std::map<std::tuple<CoderId, Source, Candidate>, std::vector<double>> scores;
  // Biden minus Trump for every unit where both are defined.
  std::map<std::pair<CoderId, Source>, std::vector<double>> contrasts;
};

AnalysisData analysis_data(const ScoreSet& scores, AnalysisLevel level);

struct SentimentCell {
  CoderId coder = CoderId::DZ;
  Source source = Source::FoxNews;
  Candidate candidate = Candidate::Biden;
  std::size_t n = 0;
  std::optional<double> mean;
  std::optional<double> sd;
};

struct SentimentTable {
  AnalysisLevel level = AnalysisLevel::Transcript;
  std::vector<SentimentCell> cells;  // coder-major, then source, then candidate
  std::vector<std::string> flags;    // combinations with no data
};

// M (SD) for all 6 x 2 x 2 cells. Throws InputError when there is no data.
SentimentTable sentiment_table(const AnalysisData& data);
SentimentTable sentiment_table(const TranscriptScores& transcript_scores,
                               const std::map<std::string, Source>& sources);

struct ReliabilityRow {
  CoderId a = CoderId::DZ;
  CoderId b = CoderId::DZ;
  std::optional<double> alpha;
  std::size_t n_units = 0;
  PairLabel label = PairLabel::Mixed;
  bool acceptable = false;  // alpha >= threshold
  std::string note;
};

struct ReliabilityReport {
  double threshold = kDefaultAcceptability;
  std::size_t units = 0;  // chunk responses the matrix was computed on
  std::vector<CoderId> coders;
  std::vector<ReliabilityRow> rows;

  const ReliabilityRow& at(CoderId a, CoderId b) const;
};

ReliabilityReport reliability_report(const stats::ReliabilityMatrix& matrix,
                                     double threshold = kDefaultAcceptability);

struct ContrastCell {
  CoderId coder = CoderId::FD;
  Source source = Source::FoxNews;
  Congruence congruence = Congruence::CrossCutting;
  std::vector<double> sample;
  std::optional<stats::KdeCurve> kde;
  std::string note;  // why the KDE is absent
};

inline constexpr double kMaxContrastDistance = 8.0;

struct CongruenceAnalysis {
  std::vector<ContrastCell> cells;  // FD x {Fox, MSNBC}, FR x {Fox, MSNBC}
  double cross_cutting_distance = 0.0;  // W(FD on Fox, FR on MSNBC)
  double congruent_distance = 0.0;      // W(FD on MSNBC, FR on Fox)
  double cross_cutting_percent = 0.0;   // distance / 8 * 100
  double congruent_percent = 0.0;

  const ContrastCell& cell(CoderId coder, Source source) const;
};

struct KdeOptions {
  stats::Grid grid{};
  std::optional<double> bandwidth;
};

// Throws InputError when an FD or FR cell is missing or empty.
CongruenceAnalysis congruence_analysis(
    const std::map<std::pair<CoderId, Source>, std::vector<double>>& contrasts,
    const KdeOptions& kde = {});

double percent_of_max(double distance);

struct ContrastAnova {
  Source source = Source::FoxNews;
  std::vector<CoderId> coders;
  std::vector<stats::Descriptives> groups;
  std::optional<stats::AnovaResult> anova;
  std::optional<stats::TukeyResult> tukey;
  std::string note;
};

ContrastAnova contrast_anova(const AnalysisData& data, Source source, double confidence = 0.95);

struct PairSummary {
  CoderId a = CoderId::DZ;
  CoderId b = CoderId::DZ;
  double alpha = 0.0;
};

// Direct agreement across pairs.
struct Level1Summary {
  std::size_t pairs_defined = 0;
  std::size_t pairs_acceptable = 0;
  std::optional<double> mean_alpha;
  std::optional<PairSummary> highest;
  std::optional<PairSummary> lowest;
};

// Within-community vs cross-partisan agreement.
struct Level2Summary {
  std::map<PairLabel, double> mean_alpha_by_label;
  std::optional<double> within_min;
  std::optional<double> cross_max;
  bool within_exceeds_cross = false;  // every within pair above every cross pair
};

// Congruent vs cross-cutting divergence of contrast distributions.
struct Level3Summary {
  double congruent_distance = 0.0;
  double cross_cutting_distance = 0.0;
  double congruent_percent = 0.0;
  double cross_cutting_percent = 0.0;
  bool congruent_exceeds_cross = false;
};

struct IntersubjectivityReport {
  Level1Summary level1;
  Level2Summary level2;
  Level3Summary level3;
};

IntersubjectivityReport intersubjectivity(const ReliabilityReport& reliability,
                                          const CongruenceAnalysis& congruence);

struct ReliabilitySampling {
  std::size_t n_total = kDefaultSubsetTotal;
  std::size_t per_source = kDefaultSubsetPerSource;
  std::uint64_t seed = 0;
};

struct ReportOptions {
  AnalysisLevel level = AnalysisLevel::Transcript;
  double threshold = kDefaultAcceptability;
  double confidence = 0.95;
  // nullopt computes reliability over every chunk response.
  std::optional<ReliabilitySampling> sampling;
  KdeOptions kde;
};

struct Report {
  std::string run_id;
  std::string prompt_hash;
  AnalysisLevel level = AnalysisLevel::Transcript;
  SentimentTable sentiment;
  ReliabilityReport reliability;
  std::vector<ContrastAnova> contrast_anova;
  CongruenceAnalysis congruence;
  IntersubjectivityReport summary;
};

Report build_report(const ScoreSet& scores, const ReportOptions& options);

enum class EmitFormat { Text, Csv, Json, SvgCurves };

// Serialisation. All output is byte-deterministic for a given report.
std::string to_json(const Report& report);
Report report_from_json(const std::string& text);
std::string render_text(const Report& report);
std::string render_reliability_text(const ReliabilityReport& reliability);
std::string sentiment_csv(const SentimentTable& table);
std::string reliability_csv(const ReliabilityReport& reliability);
std::string kde_csv(const CongruenceAnalysis& congruence);
std::string figures_svg(const CongruenceAnalysis& congruence);

// coder,transcript_id,source,candidate,mean,n_chunks,n_missing
std::string transcript_scores_csv(const TranscriptScores& scores,
                                  const std::map<std::string, Source>& sources);

// Writes report.txt, table1.csv + table2.csv + contrast_kde.csv,
// report.json and figures.svg into `dir` for the requested formats and
// returns the paths written. Throws StorageError.
std::vector<std::filesystem::path> emit(const Report& report, const std::filesystem::path& dir,
                                        const std::set<EmitFormat>& formats = {
                                            EmitFormat::Text, EmitFormat::Csv, EmitFormat::Json,
                                            EmitFormat::SvgCurves});

}  // namespace laca
