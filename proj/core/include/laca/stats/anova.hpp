#pragma once

#include <cstddef>
#include <vector>

namespace laca::stats {

struct AnovaResult {
  double F = 0.0;
  int df_between = 0;  // k - 1
  int df_within = 0;   // N - k
  double p = 1.0;
  double eta_squared = 0.0;  // SSB / (SSB + SSW)
  double ss_between = 0.0;
  double ss_within = 0.0;
  double ss_total = 0.0;
  double ms_within = 0.0;
  std::vector<double> group_means;
  std::vector<std::size_t> group_sizes;
};

// Classical one-way decomposition. Requires k >= 2 groups of n >= 2 each and
// positive within-group variance; throws StatsError otherwise.
AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups);

struct TukeyPair {
  std::size_t i = 0;
  std::size_t j = 0;
  double mean_diff = 0.0;  // mean_i - mean_j
  double std_error = 0.0;  // sqrt(MSW / 2 * (1/n_i + 1/n_j))
  double q = 0.0;
  double p_adj = 1.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct TukeyResult {
  double confidence = 0.95;
  double q_critical = 0.0;
  std::vector<TukeyPair> pairs;  // (0,1), (0,2), ..., (k-2,k-1)
};

// Tukey's HSD with the Tukey-Kramer standard error for unequal sizes.
TukeyResult tukey_hsd(const std::vector<std::vector<double>>& groups, double confidence = 0.95);

}  // namespace laca::stats
