#include "laca/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "laca/error.hpp"
#include "laca/stats/summary.hpp"
#include "laca/stats/wasserstein.hpp"

namespace laca {

std::string_view to_string(AnalysisLevel level) {
  return level == AnalysisLevel::Transcript ? "transcript" : "chunk";
}

AnalysisLevel parse_analysis_level(std::string_view text) {
  if (text == "transcript") return AnalysisLevel::Transcript;
  if (text == "chunk") return AnalysisLevel::Chunk;
  throw InputError(fmt::format("unknown analysis level '{}' (transcript|chunk)", text));
}

double parse_threshold(std::string_view text) {
  if (text == "default") return kDefaultAcceptability;
  if (text == "tentative") return 0.667;
  if (text == "reliable") return 0.80;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc{} || ptr != text.data() + text.size() || !(v >= -1.0 && v <= 1.0)) {
    throw InputError(fmt::format("bad acceptability threshold '{}'", text));
  }
  return v;
}

AnalysisData analysis_data(const ScoreSet& scores, AnalysisLevel level) {
  AnalysisData data;
  data.level = level;
  if (level == AnalysisLevel::Transcript) {
    std::map<std::pair<CoderId, std::string>, std::pair<std::optional<double>, std::optional<double>>>
        both;
    for (const auto& [key, agg] : aggregate(scores.rows)) {
      if (!agg.mean_value) continue;
      const auto source = scores.source_of(key.transcript_id);
      data.scores[{key.coder, source, key.candidate}].push_back(*agg.mean_value);
      auto& slot = both[{key.coder, key.transcript_id}];
      (key.candidate == Candidate::Biden ? slot.first : slot.second) = agg.mean_value;
    }
    for (const auto& [key, pair] : both) {
      if (pair.first && pair.second) {
        data.contrasts[{key.first, scores.source_of(key.second)}].push_back(
            stats::contrast(*pair.first, *pair.second));
      }
    }
    return data;
  }

  using ChunkRef = std::tuple<CoderId, std::string, std::size_t>;
  std::map<ChunkRef, std::pair<std::optional<int>, std::optional<int>>> both;
  for (const auto& r : scores.rows) {
    if (!r.value) continue;
    const auto source = scores.source_of(r.transcript_id);
    data.scores[{r.coder, source, r.candidate}].push_back(*r.value);
    auto& slot = both[{r.coder, r.transcript_id, r.chunk_index}];
    (r.candidate == Candidate::Biden ? slot.first : slot.second) = r.value;
  }
  for (const auto& [key, pair] : both) {
    if (pair.first && pair.second) {
      data.contrasts[{std::get<0>(key), scores.source_of(std::get<1>(key))}].push_back(
          stats::contrast(*pair.first, *pair.second));
    }
  }
  return data;
}

SentimentTable sentiment_table(const AnalysisData& data) {
  if (data.scores.empty()) throw InputError("sentiment table needs at least one score");
  SentimentTable table;
  table.level = data.level;
  for (auto coder : kAllCoders) {
    for (auto source : kAllSources) {
      for (auto cand : kAllCandidates) {
        SentimentCell cell{coder, source, cand, 0, std::nullopt, std::nullopt};
        auto it = data.scores.find({coder, source, cand});
        if (it == data.scores.end() || it->second.empty()) {
          table.flags.push_back(fmt::format("{}/{}/{}: no data", to_string(coder),
                                            to_string(source), to_string(cand)));
        } else {
          const auto d = stats::descriptives(it->second);
          cell.n = d.n;
          cell.mean = d.mean;
          cell.sd = d.sd;
        }
        table.cells.push_back(cell);
      }
    }
  }
  return table;
}

SentimentTable sentiment_table(const TranscriptScores& transcript_scores,
                               const std::map<std::string, Source>& sources) {
  AnalysisData data;
  data.level = AnalysisLevel::Transcript;
  for (const auto& [key, agg] : transcript_scores) {
    if (!agg.mean_value) continue;
    auto it = sources.find(key.transcript_id);
    if (it == sources.end()) {
      throw InputError(fmt::format("no source recorded for transcript '{}'", key.transcript_id));
    }
    data.scores[{key.coder, it->second, key.candidate}].push_back(*agg.mean_value);
  }
  return sentiment_table(data);
}

const ReliabilityRow& ReliabilityReport::at(CoderId a, CoderId b) const {
  for (const auto& r : rows) {
    if ((r.a == a && r.b == b) || (r.a == b && r.b == a)) return r;
  }
  throw InputError(fmt::format("no reliability row for ({}, {})", to_string(a), to_string(b)));
}

ReliabilityReport reliability_report(const stats::ReliabilityMatrix& matrix, double threshold) {
  ReliabilityReport out;
  out.threshold = threshold;
  out.coders = matrix.coders;
  for (const auto& e : matrix.entries) {
    ReliabilityRow row;
    row.a = e.a;
    row.b = e.b;
    row.alpha = e.alpha;
    row.n_units = e.n_units;
    row.label = e.label;
    row.acceptable = e.alpha && *e.alpha >= threshold;
    row.note = e.note;
    out.rows.push_back(std::move(row));
  }
  return out;
}

double percent_of_max(double distance) { return distance / kMaxContrastDistance * 100.0; }

const ContrastCell& CongruenceAnalysis::cell(CoderId coder, Source source) const {
  for (const auto& c : cells) {
    if (c.coder == coder && c.source == source) return c;
  }
  throw InputError(fmt::format("no contrast cell for {} on {}", to_string(coder), to_string(source)));
}

CongruenceAnalysis congruence_analysis(
    const std::map<std::pair<CoderId, Source>, std::vector<double>>& contrasts,
    const KdeOptions& kde) {
  CongruenceAnalysis out;
  for (auto coder : {CoderId::FD, CoderId::FR}) {
    for (auto source : kAllSources) {
      auto it = contrasts.find({coder, source});
      if (it == contrasts.end() || it->second.empty()) {
        throw InputError(fmt::format("missing contrast sample for {} on {}", to_string(coder),
                                     to_string(source)));
      }
      ContrastCell cell;
      cell.coder = coder;
      cell.source = source;
      cell.congruence = *congruence(persona_of(coder), source);
      cell.sample = it->second;
      try {
        cell.kde = stats::kde(cell.sample, kde.bandwidth, kde.grid);
      } catch (const StatsError& e) {
        cell.note = e.what();
      }
      out.cells.push_back(std::move(cell));
    }
  }
  const auto& fd_fox = out.cell(CoderId::FD, Source::FoxNews).sample;
  const auto& fd_msnbc = out.cell(CoderId::FD, Source::MSNBC).sample;
  const auto& fr_fox = out.cell(CoderId::FR, Source::FoxNews).sample;
  const auto& fr_msnbc = out.cell(CoderId::FR, Source::MSNBC).sample;
  out.cross_cutting_distance = stats::wasserstein_1d(fd_fox, fr_msnbc);
  out.congruent_distance = stats::wasserstein_1d(fd_msnbc, fr_fox);
  out.cross_cutting_percent = percent_of_max(out.cross_cutting_distance);
  out.congruent_percent = percent_of_max(out.congruent_distance);
  return out;
}

ContrastAnova contrast_anova(const AnalysisData& data, Source source, double confidence) {
  ContrastAnova out;
  out.source = source;
  std::vector<std::vector<double>> groups;
  for (auto coder : kAllCoders) {
    auto it = data.contrasts.find({coder, source});
    if (it == data.contrasts.end() || it->second.empty()) continue;
    out.coders.push_back(coder);
    out.groups.push_back(stats::descriptives(it->second));
    groups.push_back(it->second);
  }
  try {
    out.anova = stats::one_way_anova(groups);
    out.tukey = stats::tukey_hsd(groups, confidence);
  } catch (const StatsError& e) {
    out.note = e.what();
  }
  return out;
}

IntersubjectivityReport intersubjectivity(const ReliabilityReport& reliability,
                                          const CongruenceAnalysis& congruence) {
  IntersubjectivityReport out;
  auto& l1 = out.level1;
  double sum = 0.0;
  std::map<PairLabel, std::pair<double, std::size_t>> by_label;
  for (const auto& row : reliability.rows) {
    if (!row.alpha) continue;
    const double a = *row.alpha;
    ++l1.pairs_defined;
    if (row.acceptable) ++l1.pairs_acceptable;
    sum += a;
    if (!l1.highest || a > l1.highest->alpha) l1.highest = PairSummary{row.a, row.b, a};
    if (!l1.lowest || a < l1.lowest->alpha) l1.lowest = PairSummary{row.a, row.b, a};
    auto& [s, n] = by_label[row.label];
    s += a;
    ++n;
    auto& l2 = out.level2;
    if (is_within_community(row.label)) {
      l2.within_min = l2.within_min ? std::min(*l2.within_min, a) : a;
    } else if (row.label == PairLabel::CrossPartisan) {
      l2.cross_max = l2.cross_max ? std::max(*l2.cross_max, a) : a;
    }
  }
  if (l1.pairs_defined > 0) l1.mean_alpha = sum / static_cast<double>(l1.pairs_defined);
  for (const auto& [label, sn] : by_label) {
    out.level2.mean_alpha_by_label[label] = sn.first / static_cast<double>(sn.second);
  }
  out.level2.within_exceeds_cross = out.level2.within_min && out.level2.cross_max &&
                                    *out.level2.within_min > *out.level2.cross_max;

  auto& l3 = out.level3;
  l3.congruent_distance = congruence.congruent_distance;
  l3.cross_cutting_distance = congruence.cross_cutting_distance;
  l3.congruent_percent = congruence.congruent_percent;
  l3.cross_cutting_percent = congruence.cross_cutting_percent;
  l3.congruent_exceeds_cross = l3.congruent_distance > l3.cross_cutting_distance;
  return out;
}

Report build_report(const ScoreSet& scores, const ReportOptions& options) {
  if (scores.rows.empty()) throw InputError("cannot build a report from an empty score set");
  Report report;
  report.run_id = scores.metadata.run_id;
  report.prompt_hash = scores.metadata.prompt_hash;
  report.level = options.level;

  const auto data = analysis_data(scores, options.level);
  report.sentiment = sentiment_table(data);

  std::vector<SentimentScore> reliability_rows;
  if (options.sampling) {
    reliability_rows = reliability_subset(scores, options.sampling->n_total,
                                          options.sampling->per_source, options.sampling->seed)
                           .rows;
  } else {
    reliability_rows = scores.rows;
  }
  const auto table = ratings_table(reliability_rows);
  report.reliability =
      reliability_report(stats::pairwise_reliability(table, table.coders), options.threshold);
  report.reliability.units = table.units.size();

  for (auto source : kAllSources) {
    report.contrast_anova.push_back(contrast_anova(data, source, options.confidence));
  }
  report.congruence = congruence_analysis(data.contrasts, options.kde);
  report.summary = intersubjectivity(report.reliability, report.congruence);
  return report;
}

}  // namespace laca
