#include "laca/stats/kde.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "laca/error.hpp"
#include "laca/stats/summary.hpp"

namespace laca::stats {

double silverman_bandwidth(std::span<const double> values) {
  if (values.size() < 2) throw StatsError("bandwidth selection needs at least two values");
  const double sd = *descriptives(values).sd;
  const double iqr = quantile(values, 0.75) - quantile(values, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (spread <= 0.0) spread = std::max(sd, iqr / 1.34);
  if (spread <= 0.0) {
    throw StatsError("degenerate sample (zero SD and IQR); pass an explicit bandwidth");
  }
  return 0.9 * spread * std::pow(static_cast<double>(values.size()), -0.2);
}

double kde_at(std::span<const double> values, double bandwidth, double x) {
  const double norm = 1.0 / (static_cast<double>(values.size()) * bandwidth *
                             std::sqrt(2.0 * std::numbers::pi));
  double sum = 0.0;
  for (double v : values) {
    const double u = (x - v) / bandwidth;
    sum += std::exp(-0.5 * u * u);
  }
  return sum * norm;
}

KdeCurve kde(std::span<const double> values, std::optional<double> bandwidth, Grid grid) {
  if (values.size() < 2) throw StatsError("KDE needs at least two values");
  if (bandwidth && !(*bandwidth > 0.0)) {
    throw InputError(fmt::format("KDE bandwidth {} must be positive", *bandwidth));
  }
  if (grid.points < 2 || !(grid.hi > grid.lo)) {
    throw InputError("KDE grid needs hi > lo and at least two points");
  }
  KdeCurve curve;
  curve.bandwidth = bandwidth ? *bandwidth : silverman_bandwidth(values);
  curve.x.reserve(grid.points);
  curve.density.reserve(grid.points);
  const double step = (grid.hi - grid.lo) / static_cast<double>(grid.points - 1);
  for (std::size_t i = 0; i < grid.points; ++i) {
    const double x = grid.lo + step * static_cast<double>(i);
    curve.x.push_back(x);
    curve.density.push_back(kde_at(values, curve.bandwidth, x));
  }
  return curve;
}

double trapezoid(const KdeCurve& curve) {
  double area = 0.0;
  for (std::size_t i = 1; i < curve.x.size(); ++i) {
    area += 0.5 * (curve.density[i] + curve.density[i - 1]) * (curve.x[i] - curve.x[i - 1]);
  }
  return area;
}

}  // namespace laca::stats
