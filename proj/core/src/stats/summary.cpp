#include "laca/stats/summary.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "laca/error.hpp"

namespace laca::stats {

double contrast(double biden_score, double trump_score) {
  auto in_scale = [](double v) { return v >= -2.0 && v <= 2.0; };
  if (!in_scale(biden_score) || !in_scale(trump_score)) {
    throw InputError(
        fmt::format("contrast inputs ({}, {}) outside the [-2, 2] scale", biden_score, trump_score));
  }
  return biden_score - trump_score;
}

Descriptives descriptives(std::span<const double> values) {
  if (values.empty()) throw StatsError("descriptives of an empty sample");
  Descriptives d;
  d.n = values.size();
  double sum = 0.0;
  for (double v : values) sum += v;
  d.mean = sum / static_cast<double>(d.n);
  if (d.n >= 2) {
    double ss = 0.0;
    for (double v : values) ss += (v - d.mean) * (v - d.mean);
    d.sd = std::sqrt(ss / static_cast<double>(d.n - 1));
  }
  return d;
}

double quantile(std::span<const double> values, double p) {
  if (values.empty()) throw StatsError("quantile of an empty sample");
  if (!(p >= 0.0 && p <= 1.0)) throw InputError(fmt::format("quantile level {} outside [0, 1]", p));
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace laca::stats
