#include "laca/stats/anova.hpp"

#include <cmath>

#include <fmt/format.h>

#include "laca/error.hpp"
#include "laca/stats/studentized_range.hpp"

namespace laca::stats {

AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups) {
  if (groups.size() < 2) throw StatsError("ANOVA needs at least two groups");
  AnovaResult r;
  double grand_sum = 0.0;
  std::size_t total_n = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].size() < 2) {
      throw StatsError(fmt::format("ANOVA group {} has {} values; need at least 2", g,
                                   groups[g].size()));
    }
    double sum = 0.0;
    for (double v : groups[g]) sum += v;
    r.group_means.push_back(sum / static_cast<double>(groups[g].size()));
    r.group_sizes.push_back(groups[g].size());
    grand_sum += sum;
    total_n += groups[g].size();
  }
  const double grand_mean = grand_sum / static_cast<double>(total_n);
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double d = r.group_means[g] - grand_mean;
    r.ss_between += static_cast<double>(groups[g].size()) * d * d;
    for (double v : groups[g]) {
      r.ss_within += (v - r.group_means[g]) * (v - r.group_means[g]);
      r.ss_total += (v - grand_mean) * (v - grand_mean);
    }
  }
  if (r.ss_within <= 0.0) throw StatsError("ANOVA is degenerate: zero within-group variance");

  r.df_between = static_cast<int>(groups.size()) - 1;
  r.df_within = static_cast<int>(total_n - groups.size());
  r.ms_within = r.ss_within / r.df_within;
  r.F = (r.ss_between / r.df_between) / r.ms_within;
  r.p = f_distribution_sf(r.F, r.df_between, r.df_within);
  r.eta_squared = r.ss_between / (r.ss_between + r.ss_within);
  return r;
}

TukeyResult tukey_hsd(const std::vector<std::vector<double>>& groups, double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw InputError(fmt::format("confidence {} outside (0, 1)", confidence));
  }
  const auto anova = one_way_anova(groups);
  const int k = static_cast<int>(groups.size());
  TukeyResult out;
  out.confidence = confidence;
  out.q_critical = studentized_range_quantile(confidence, k, anova.df_within);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    for (std::size_t j = i + 1; j < groups.size(); ++j) {
      TukeyPair p;
      p.i = i;
      p.j = j;
      p.mean_diff = anova.group_means[i] - anova.group_means[j];
      p.std_error = std::sqrt(anova.ms_within / 2.0 *
                              (1.0 / static_cast<double>(anova.group_sizes[i]) +
                               1.0 / static_cast<double>(anova.group_sizes[j])));
      p.q = std::abs(p.mean_diff) / p.std_error;
      p.p_adj = p.mean_diff == 0.0 ? 1.0 : studentized_range_sf(p.q, k, anova.df_within);
      p.ci_low = p.mean_diff - out.q_critical * p.std_error;
      p.ci_high = p.mean_diff + out.q_critical * p.std_error;
      out.pairs.push_back(p);
    }
  }
  return out;
}

}  // namespace laca::stats
