#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace laca::stats {

// Biden score minus Trump score. Both inputs must lie in [-2, 2]; the
// result lies in [-4, 4]. Throws InputError otherwise.
double contrast(double biden_score, double trump_score);

struct Descriptives {
  std::size_t n = 0;
  double mean = 0.0;
  std::optional<double> sd;  // sample SD (n - 1); undefined for n == 1
};

// Throws StatsError on an empty sample.
Descriptives descriptives(std::span<const double> values);

// Linear-interpolation quantile (Hyndman-Fan type 7), p in [0, 1].
double quantile(std::span<const double> values, double p);

}  // namespace laca::stats
