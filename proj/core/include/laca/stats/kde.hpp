#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace laca::stats {

struct Grid {
  double lo = -6.0;
  double hi = 6.0;
  std::size_t points = 241;
};

struct KdeCurve {
  double bandwidth = 0.0;
  std::vector<double> x;
  std::vector<double> density;
};

// Silverman's rule of thumb 0.9 * min(sd, IQR / 1.34) * n^(-1/5). When one
// of sd or IQR is zero the other is used; both zero throws StatsError.
double silverman_bandwidth(std::span<const double> values);

// Gaussian-kernel density estimate at a single point.
double kde_at(std::span<const double> values, double bandwidth, double x);

// Density on an evenly spaced grid. Requires n >= 2 and bandwidth > 0 when
// given; the default bandwidth is Silverman's.
KdeCurve kde(std::span<const double> values, std::optional<double> bandwidth = {}, Grid grid = {});

// Trapezoid rule over a curve; used to check normalisation.
double trapezoid(const KdeCurve& curve);

}  // namespace laca::stats
