#include <algorithm>
#include <fstream>

#include <fmt/format.h>
#include <json.hpp>

#include "csv.hpp"
#include "laca/error.hpp"
#include "laca/report.hpp"

namespace nlohmann {
template <typename T>
struct adl_serializer<std::optional<T>> {
  static void to_json(ordered_json& j, const std::optional<T>& v) {
    if (v) {
      j = *v;
    } else {
      j = nullptr;
    }
  }
  static void from_json(const ordered_json& j, std::optional<T>& v) {
    if (j.is_null()) {
      v.reset();
    } else {
      v = j.get<T>();
    }
  }
};
}  // namespace nlohmann

namespace laca {

using Json = nlohmann::ordered_json;

namespace {

template <typename Enum, typename Parse>
Enum enum_from(const Json& j, Parse parse) {
  return parse(j.get<std::string>());
}

Congruence parse_congruence(std::string_view s) {
  if (s == "Congruent") return Congruence::Congruent;
  if (s == "CrossCutting") return Congruence::CrossCutting;
  throw InputError(fmt::format("unknown congruence '{}'", s));
}

}  // namespace

namespace stats {

void to_json(Json& j, const Descriptives& d) { j = Json{{"n", d.n}, {"mean", d.mean}, {"sd", d.sd}}; }
void from_json(const Json& j, Descriptives& d) {
  j.at("n").get_to(d.n);
  j.at("mean").get_to(d.mean);
  j.at("sd").get_to(d.sd);
}

void to_json(Json& j, const AnovaResult& a) {
  j = Json{{"F", a.F},
           {"df_between", a.df_between},
           {"df_within", a.df_within},
           {"p", a.p},
           {"eta_squared", a.eta_squared},
           {"ss_between", a.ss_between},
           {"ss_within", a.ss_within},
           {"ss_total", a.ss_total},
           {"ms_within", a.ms_within},
           {"group_means", a.group_means},
           {"group_sizes", a.group_sizes}};
}
void from_json(const Json& j, AnovaResult& a) {
  j.at("F").get_to(a.F);
  j.at("df_between").get_to(a.df_between);
  j.at("df_within").get_to(a.df_within);
  j.at("p").get_to(a.p);
  j.at("eta_squared").get_to(a.eta_squared);
  j.at("ss_between").get_to(a.ss_between);
  j.at("ss_within").get_to(a.ss_within);
  j.at("ss_total").get_to(a.ss_total);
  j.at("ms_within").get_to(a.ms_within);
  j.at("group_means").get_to(a.group_means);
  j.at("group_sizes").get_to(a.group_sizes);
}

void to_json(Json& j, const TukeyPair& p) {
  j = Json{{"i", p.i},         {"j", p.j},         {"mean_diff", p.mean_diff},
           {"std_error", p.std_error}, {"q", p.q}, {"p_adj", p.p_adj},
           {"ci_low", p.ci_low}, {"ci_high", p.ci_high}};
}
void from_json(const Json& j, TukeyPair& p) {
  j.at("i").get_to(p.i);
  j.at("j").get_to(p.j);
  j.at("mean_diff").get_to(p.mean_diff);
  j.at("std_error").get_to(p.std_error);
  j.at("q").get_to(p.q);
  j.at("p_adj").get_to(p.p_adj);
  j.at("ci_low").get_to(p.ci_low);
  j.at("ci_high").get_to(p.ci_high);
}

void to_json(Json& j, const TukeyResult& t) {
  j = Json{{"confidence", t.confidence}, {"q_critical", t.q_critical}, {"pairs", t.pairs}};
}
void from_json(const Json& j, TukeyResult& t) {
  j.at("confidence").get_to(t.confidence);
  j.at("q_critical").get_to(t.q_critical);
  j.at("pairs").get_to(t.pairs);
}

void to_json(Json& j, const KdeCurve& c) {
  j = Json{{"bandwidth", c.bandwidth}, {"x", c.x}, {"density", c.density}};
}
void from_json(const Json& j, KdeCurve& c) {
  j.at("bandwidth").get_to(c.bandwidth);
  j.at("x").get_to(c.x);
  j.at("density").get_to(c.density);
}

}  // namespace stats

void to_json(Json& j, CoderId id) { j = std::string(to_string(id)); }
void from_json(const Json& j, CoderId& id) { id = enum_from<CoderId>(j, parse_coder_id); }
void to_json(Json& j, Source s) { j = std::string(to_string(s)); }
void from_json(const Json& j, Source& s) { s = enum_from<Source>(j, parse_source); }
void to_json(Json& j, Candidate c) { j = std::string(to_string(c)); }
void from_json(const Json& j, Candidate& c) { c = enum_from<Candidate>(j, parse_candidate); }
void to_json(Json& j, PairLabel l) { j = std::string(to_string(l)); }
void from_json(const Json& j, PairLabel& l) { l = enum_from<PairLabel>(j, parse_pair_label); }
void to_json(Json& j, Congruence c) { j = std::string(to_string(c)); }
void from_json(const Json& j, Congruence& c) { c = enum_from<Congruence>(j, parse_congruence); }
void to_json(Json& j, AnalysisLevel l) { j = std::string(to_string(l)); }
void from_json(const Json& j, AnalysisLevel& l) { l = enum_from<AnalysisLevel>(j, parse_analysis_level); }

void to_json(Json& j, const SentimentCell& c) {
  j = Json{{"coder", c.coder}, {"source", c.source}, {"candidate", c.candidate},
           {"n", c.n},         {"mean", c.mean},     {"sd", c.sd}};
}
void from_json(const Json& j, SentimentCell& c) {
  j.at("coder").get_to(c.coder);
  j.at("source").get_to(c.source);
  j.at("candidate").get_to(c.candidate);
  j.at("n").get_to(c.n);
  j.at("mean").get_to(c.mean);
  j.at("sd").get_to(c.sd);
}

void to_json(Json& j, const SentimentTable& t) {
  j = Json{{"level", t.level}, {"cells", t.cells}, {"flags", t.flags}};
}
void from_json(const Json& j, SentimentTable& t) {
  j.at("level").get_to(t.level);
  j.at("cells").get_to(t.cells);
  j.at("flags").get_to(t.flags);
}

void to_json(Json& j, const ReliabilityRow& r) {
  j = Json{{"a", r.a},         {"b", r.b},           {"alpha", r.alpha},
           {"n_units", r.n_units}, {"label", r.label}, {"acceptable", r.acceptable},
           {"note", r.note}};
}
void from_json(const Json& j, ReliabilityRow& r) {
  j.at("a").get_to(r.a);
  j.at("b").get_to(r.b);
  j.at("alpha").get_to(r.alpha);
  j.at("n_units").get_to(r.n_units);
  j.at("label").get_to(r.label);
  j.at("acceptable").get_to(r.acceptable);
  j.at("note").get_to(r.note);
}

void to_json(Json& j, const ReliabilityReport& r) {
  j = Json{{"threshold", r.threshold}, {"units", r.units}, {"coders", r.coders}, {"rows", r.rows}};
}
void from_json(const Json& j, ReliabilityReport& r) {
  j.at("threshold").get_to(r.threshold);
  j.at("units").get_to(r.units);
  j.at("coders").get_to(r.coders);
  j.at("rows").get_to(r.rows);
}

void to_json(Json& j, const ContrastCell& c) {
  j = Json{{"coder", c.coder},   {"source", c.source}, {"congruence", c.congruence},
           {"sample", c.sample}, {"kde", c.kde},       {"note", c.note}};
}
void from_json(const Json& j, ContrastCell& c) {
  j.at("coder").get_to(c.coder);
  j.at("source").get_to(c.source);
  j.at("congruence").get_to(c.congruence);
  j.at("sample").get_to(c.sample);
  j.at("kde").get_to(c.kde);
  j.at("note").get_to(c.note);
}

void to_json(Json& j, const CongruenceAnalysis& c) {
  j = Json{{"cells", c.cells},
           {"cross_cutting_distance", c.cross_cutting_distance},
           {"congruent_distance", c.congruent_distance},
           {"cross_cutting_percent", c.cross_cutting_percent},
           {"congruent_percent", c.congruent_percent}};
}
void from_json(const Json& j, CongruenceAnalysis& c) {
  j.at("cells").get_to(c.cells);
  j.at("cross_cutting_distance").get_to(c.cross_cutting_distance);
  j.at("congruent_distance").get_to(c.congruent_distance);
  j.at("cross_cutting_percent").get_to(c.cross_cutting_percent);
  j.at("congruent_percent").get_to(c.congruent_percent);
}

void to_json(Json& j, const ContrastAnova& a) {
  j = Json{{"source", a.source}, {"coders", a.coders}, {"groups", a.groups},
           {"anova", a.anova},   {"tukey", a.tukey},   {"note", a.note}};
}
void from_json(const Json& j, ContrastAnova& a) {
  j.at("source").get_to(a.source);
  j.at("coders").get_to(a.coders);
  j.at("groups").get_to(a.groups);
  j.at("anova").get_to(a.anova);
  j.at("tukey").get_to(a.tukey);
  j.at("note").get_to(a.note);
}

void to_json(Json& j, const PairSummary& p) { j = Json{{"a", p.a}, {"b", p.b}, {"alpha", p.alpha}}; }
void from_json(const Json& j, PairSummary& p) {
  j.at("a").get_to(p.a);
  j.at("b").get_to(p.b);
  j.at("alpha").get_to(p.alpha);
}

void to_json(Json& j, const IntersubjectivityReport& r) {
  Json by_label = Json::object();
  for (const auto& [label, mean] : r.level2.mean_alpha_by_label) {
    by_label[std::string(to_string(label))] = mean;
  }
  j = Json{{"level1",
            {{"pairs_defined", r.level1.pairs_defined},
             {"pairs_acceptable", r.level1.pairs_acceptable},
             {"mean_alpha", r.level1.mean_alpha},
             {"highest", r.level1.highest},
             {"lowest", r.level1.lowest}}},
           {"level2",
            {{"mean_alpha_by_label", by_label},
             {"within_min", r.level2.within_min},
             {"cross_max", r.level2.cross_max},
             {"within_exceeds_cross", r.level2.within_exceeds_cross}}},
           {"level3",
            {{"congruent_distance", r.level3.congruent_distance},
             {"cross_cutting_distance", r.level3.cross_cutting_distance},
             {"congruent_percent", r.level3.congruent_percent},
             {"cross_cutting_percent", r.level3.cross_cutting_percent},
             {"congruent_exceeds_cross", r.level3.congruent_exceeds_cross}}}};
}
void from_json(const Json& j, IntersubjectivityReport& r) {
  const auto& l1 = j.at("level1");
  l1.at("pairs_defined").get_to(r.level1.pairs_defined);
  l1.at("pairs_acceptable").get_to(r.level1.pairs_acceptable);
  l1.at("mean_alpha").get_to(r.level1.mean_alpha);
  l1.at("highest").get_to(r.level1.highest);
  l1.at("lowest").get_to(r.level1.lowest);
  const auto& l2 = j.at("level2");
  for (const auto& [label, mean] : l2.at("mean_alpha_by_label").items()) {
    r.level2.mean_alpha_by_label[parse_pair_label(label)] = mean.get<double>();
  }
  l2.at("within_min").get_to(r.level2.within_min);
  l2.at("cross_max").get_to(r.level2.cross_max);
  l2.at("within_exceeds_cross").get_to(r.level2.within_exceeds_cross);
  const auto& l3 = j.at("level3");
  l3.at("congruent_distance").get_to(r.level3.congruent_distance);
  l3.at("cross_cutting_distance").get_to(r.level3.cross_cutting_distance);
  l3.at("congruent_percent").get_to(r.level3.congruent_percent);
  l3.at("cross_cutting_percent").get_to(r.level3.cross_cutting_percent);
  l3.at("congruent_exceeds_cross").get_to(r.level3.congruent_exceeds_cross);
}

std::string to_json(const Report& report) {
  Json j{{"run_id", report.run_id},
         {"prompt_hash", report.prompt_hash},
         {"level", report.level},
         {"sentiment", report.sentiment},
         {"reliability", report.reliability},
         {"contrast_anova", report.contrast_anova},
         {"congruence", report.congruence},
         {"summary", report.summary}};
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  Report r;
  try {
    const auto j = Json::parse(text);
    j.at("run_id").get_to(r.run_id);
    j.at("prompt_hash").get_to(r.prompt_hash);
    j.at("level").get_to(r.level);
    j.at("sentiment").get_to(r.sentiment);
    j.at("reliability").get_to(r.reliability);
    j.at("contrast_anova").get_to(r.contrast_anova);
    j.at("congruence").get_to(r.congruence);
    j.at("summary").get_to(r.summary);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("malformed report JSON: {}", e.what()));
  }
  return r;
}

namespace {

std::string opt_fixed(const std::optional<double>& v, int digits = 6) {
  return v ? fmt::format("{:.{}f}", *v, digits) : std::string();
}

std::string m_sd(const SentimentCell& c) {
  if (!c.mean) return "n/a";
  return c.sd ? fmt::format("{:.2f} ({:.2f})", *c.mean, *c.sd) : fmt::format("{:.2f} (-)", *c.mean);
}

const SentimentCell* find_cell(const SentimentTable& t, CoderId coder, Source s, Candidate c) {
  for (const auto& cell : t.cells) {
    if (cell.coder == coder && cell.source == s && cell.candidate == c) return &cell;
  }
  return nullptr;
}

char label_mark(PairLabel l) {
  switch (l) {
    case PairLabel::WithinDemocrat: return 'D';
    case PairLabel::WithinRepublican: return 'R';
    case PairLabel::CrossPartisan: return 'X';
    case PairLabel::ZeroShotPair: return 'Z';
    case PairLabel::Mixed: return ' ';
  }
  return ' ';
}

std::string format_p(double p) {
  if (p < 0.001) return "<.001";
  return fmt::format("{:.3f}", p);
}

}  // namespace

std::string render_reliability_text(const ReliabilityReport& reliability) {
  std::string out = fmt::format(
      "Intercoder reliability (ordinal Krippendorff's alpha, {} chunk responses)\n",
      reliability.units);
  const auto& coders = reliability.coders;
  out += fmt::format("{:<6}", "");
  for (std::size_t c = 0; c + 1 < coders.size(); ++c) out += fmt::format("{:>9}", to_string(coders[c]));
  out += '\n';
  for (std::size_t r = 1; r < coders.size(); ++r) {
    out += fmt::format("{:<6}", to_string(coders[r]));
    for (std::size_t c = 0; c < r; ++c) {
      const auto& row = reliability.at(coders[r], coders[c]);
      std::string cell = row.alpha ? fmt::format("{:.2f}", *row.alpha) : std::string("n/a");
      cell += row.acceptable ? '*' : ' ';
      cell += label_mark(row.label);
      out += fmt::format("{:>9}", cell);
    }
    out += '\n';
  }
  out += fmt::format(
      "* alpha >= {:.3f}; D within-Democrat, R within-Republican, X cross-partisan, Z zero-shot pair\n",
      reliability.threshold);
  return out;
}

std::string render_text(const Report& report) {
  std::string out;
  out += fmt::format("Run {} (prompt {})\n\n", report.run_id, report.prompt_hash);
  out += fmt::format("Sentiment toward Biden and Trump, M (SD), {} level\n",
                     to_string(report.sentiment.level));
  out += fmt::format("{:<6}{:>16}{:>16}{:>16}{:>16}\n", "Model", "Fox Biden", "Fox Trump",
                     "MSNBC Biden", "MSNBC Trump");
  for (auto coder : kAllCoders) {
    out += fmt::format("{:<6}", to_string(coder));
    for (auto s : kAllSources) {
      for (auto c : kAllCandidates) {
        const auto* cell = find_cell(report.sentiment, coder, s, c);
        out += fmt::format("{:>16}", cell ? m_sd(*cell) : std::string("n/a"));
      }
    }
    out += '\n';
  }
  for (const auto& f : report.sentiment.flags) out += fmt::format("  flag: {}\n", f);
  out += '\n';
  out += render_reliability_text(report.reliability);
  out += '\n';

  for (const auto& a : report.contrast_anova) {
    out += fmt::format("Sentiment contrast (Biden - Trump) on {}\n", to_string(a.source));
    if (!a.anova) {
      out += fmt::format("  ANOVA undefined: {}\n\n", a.note);
      continue;
    }
    const auto p_text = a.anova->p < 0.001 ? std::string("p < .001") : fmt::format("p = {:.3f}", a.anova->p);
    out += fmt::format("  F({}, {}) = {:.2f}, {}, eta^2 = {:.3f}\n", a.anova->df_between,
                       a.anova->df_within, a.anova->F, p_text, a.anova->eta_squared);
    out += fmt::format("  {:<4}{:<4}{:>9}{:>9}{:>18}\n", "I", "J", "Mdiff", "p", "CI");
    for (const auto& p : a.tukey->pairs) {
      out += fmt::format("  {:<4}{:<4}{:>9.2f}{:>9}   [{:.2f}, {:.2f}]\n",
                         to_string(a.coders[p.i]), to_string(a.coders[p.j]), p.mean_diff,
                         format_p(p.p_adj), p.ci_low, p.ci_high);
    }
    out += '\n';
  }

  const auto& s = report.summary;
  out += "Intersubjectivity\n";
  out += fmt::format("  Level 1: {} of {} pairs acceptable, mean alpha {}\n",
                     s.level1.pairs_acceptable, s.level1.pairs_defined,
                     s.level1.mean_alpha ? fmt::format("{:.3f}", *s.level1.mean_alpha) : "n/a");
  out += fmt::format("  Level 2: lowest within-community alpha {}, highest cross-partisan alpha {} ({})\n",
                     s.level2.within_min ? fmt::format("{:.3f}", *s.level2.within_min) : "n/a",
                     s.level2.cross_max ? fmt::format("{:.3f}", *s.level2.cross_max) : "n/a",
                     s.level2.within_exceeds_cross ? "within > cross" : "not separated");
  out += fmt::format(
      "  Level 3: congruent W = {:.3f} ({:.2f}% of max), cross-cutting W = {:.3f} ({:.2f}% of max)\n",
      s.level3.congruent_distance, s.level3.congruent_percent, s.level3.cross_cutting_distance,
      s.level3.cross_cutting_percent);
  return out;
}

std::string sentiment_csv(const SentimentTable& table) {
  std::string out = "coder,source,candidate,n,mean,sd\n";
  for (const auto& c : table.cells) {
    out += fmt::format("{},{},{},{},{},{}\n", to_string(c.coder), to_string(c.source),
                       to_string(c.candidate), c.n, opt_fixed(c.mean), opt_fixed(c.sd));
  }
  return out;
}

std::string reliability_csv(const ReliabilityReport& reliability) {
  std::string out = "coder_a,coder_b,alpha,n_units,label,acceptable\n";
  for (const auto& r : reliability.rows) {
    out += fmt::format("{},{},{},{},{},{}\n", to_string(r.a), to_string(r.b), opt_fixed(r.alpha),
                       r.n_units, to_string(r.label), r.acceptable ? 1 : 0);
  }
  return out;
}

std::string kde_csv(const CongruenceAnalysis& congruence) {
  std::string out = "x";
  const std::vector<double>* grid = nullptr;
  for (const auto& c : congruence.cells) {
    out += fmt::format(",{}_{}", to_string(c.coder), to_string(c.source));
    if (!grid && c.kde) grid = &c.kde->x;
  }
  out += '\n';
  if (!grid) return out;
  for (std::size_t i = 0; i < grid->size(); ++i) {
    out += fmt::format("{:.6f}", (*grid)[i]);
    for (const auto& c : congruence.cells) {
      out += ',';
      if (c.kde) out += fmt::format("{:.8f}", c.kde->density[i]);
    }
    out += '\n';
  }
  return out;
}

std::string figures_svg(const CongruenceAnalysis& congruence) {
  constexpr double kPanelW = 440.0;
  constexpr double kPanelH = 280.0;
  constexpr double kMargin = 40.0;
  constexpr double kTop = 50.0;

  double x_lo = 0.0, x_hi = 1.0, y_max = 0.0;
  bool any = false;
  for (const auto& c : congruence.cells) {
    if (!c.kde) continue;
    if (!any) {
      x_lo = c.kde->x.front();
      x_hi = c.kde->x.back();
      any = true;
    }
    x_lo = std::min(x_lo, c.kde->x.front());
    x_hi = std::max(x_hi, c.kde->x.back());
    for (double d : c.kde->density) y_max = std::max(y_max, d);
  }
  if (y_max <= 0.0) y_max = 1.0;

  struct Panel {
    std::string title;
    std::pair<CoderId, Source> fd;
    std::pair<CoderId, Source> fr;
    double distance;
    double percent;
  };
  const Panel panels[] = {
      {"Cross-cutting: FD on FoxNews vs FR on MSNBC", {CoderId::FD, Source::FoxNews},
       {CoderId::FR, Source::MSNBC}, congruence.cross_cutting_distance,
       congruence.cross_cutting_percent},
      {"Congruent: FD on MSNBC vs FR on FoxNews", {CoderId::FD, Source::MSNBC},
       {CoderId::FR, Source::FoxNews}, congruence.congruent_distance, congruence.congruent_percent},
  };

  const double width = 2 * (kPanelW + 2 * kMargin);
  const double height = kPanelH + kTop + kMargin;
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.0f} {:.0f}\" font-family=\"sans-serif\" font-size=\"12\">\n",
      width, height, width, height);
  for (std::size_t p = 0; p < 2; ++p) {
    const auto& panel = panels[p];
    const double ox = kMargin + static_cast<double>(p) * (kPanelW + 2 * kMargin);
    const double oy = kTop;
    out += fmt::format("<g id=\"panel{}\">\n", p + 1);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{}</text>\n", ox, oy - 28, panel.title);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">W = {:.3f} ({:.2f}% of max)</text>\n", ox,
                       oy - 12, panel.distance, panel.percent);
    out += fmt::format(
        "<rect x=\"{:.2f}\" y=\"{:.2f}\" width=\"{:.2f}\" height=\"{:.2f}\" fill=\"none\" "
        "stroke=\"#888\"/>\n",
        ox, oy, kPanelW, kPanelH);
    for (const auto& [who, colour] : {std::pair{panel.fd, "#1f5fbf"}, std::pair{panel.fr, "#c8302c"}}) {
      const auto& cell = congruence.cell(who.first, who.second);
      if (!cell.kde) continue;
      std::string points;
      for (std::size_t i = 0; i < cell.kde->x.size(); ++i) {
        const double px = ox + (cell.kde->x[i] - x_lo) / (x_hi - x_lo) * kPanelW;
        const double py = oy + kPanelH - cell.kde->density[i] / y_max * kPanelH;
        if (i) points += ' ';
        points += fmt::format("{:.2f},{:.2f}", px, py);
      }
      out += fmt::format(
          "<polyline data-cell=\"{}_{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\" "
          "points=\"{}\"/>\n",
          to_string(cell.coder), to_string(cell.source), colour, points);
    }
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\">{:.1f}</text>\n", ox, oy + kPanelH + 16, x_lo);
    out += fmt::format("<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\">{:.1f}</text>\n",
                       ox + kPanelW, oy + kPanelH + 16, x_hi);
    out += "</g>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string transcript_scores_csv(const TranscriptScores& scores,
                                  const std::map<std::string, Source>& sources) {
  std::string out = "coder,transcript_id,source,candidate,mean,n_chunks,n_missing\n";
  for (const auto& [key, agg] : scores) {
    auto it = sources.find(key.transcript_id);
    out += fmt::format("{},{},{},{},{},{},{}\n", to_string(key.coder), csv::escape(key.transcript_id),
                       it == sources.end() ? std::string_view() : to_string(it->second),
                       to_string(key.candidate), opt_fixed(agg.mean_value), agg.n_chunks,
                       agg.n_missing);
  }
  return out;
}

std::vector<std::filesystem::path> emit(const Report& report, const std::filesystem::path& dir,
                                        const std::set<EmitFormat>& formats) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw StorageError(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));

  std::vector<std::filesystem::path> written;
  auto write = [&](const char* name, const std::string& body) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw StorageError(fmt::format("cannot write '{}'", path.string()));
    out << body;
    out.flush();
    if (!out) throw StorageError(fmt::format("write to '{}' failed", path.string()));
    written.push_back(path);
  };
  if (formats.contains(EmitFormat::Text)) write("report.txt", render_text(report));
  if (formats.contains(EmitFormat::Csv)) {
    write("table1.csv", sentiment_csv(report.sentiment));
    write("table2.csv", reliability_csv(report.reliability));
    write("contrast_kde.csv", kde_csv(report.congruence));
  }
  if (formats.contains(EmitFormat::Json)) write("report.json", to_json(report));
  if (formats.contains(EmitFormat::SvgCurves)) write("figures.svg", figures_svg(report.congruence));
  return written;
}

}  // namespace laca
