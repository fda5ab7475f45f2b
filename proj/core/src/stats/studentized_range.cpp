#include "laca/stats/studentized_range.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/beta.hpp>
#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "laca/error.hpp"

namespace laca::stats {
namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;

constexpr double kTol = 1e-12;
constexpr unsigned kMaxDepth = 20;

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); }
double normal_upper(double z) { return 0.5 * std::erfc(z / std::numbers::sqrt2); }

// Phi(z) - Phi(z - w), evaluated on whichever tail keeps precision.
double normal_band(double z, double w) {
  if (z - w > 0.0) return normal_upper(z - w) - normal_upper(z);
  return normal_upper(-z) - normal_upper(w - z);
}

// Range distribution of k standard normals (infinite df).
double range_cdf(double w, int k) {
  if (w <= 0.0) return 0.0;
  auto integrand = [w, k](double z) { return normal_pdf(z) * std::pow(normal_band(z, w), k - 1); };
  // Split where the band is widest so each panel is smooth.
  const double mid = w / 2.0;
  const double lo = std::min(-8.5, mid - 8.5);
  const double hi = std::max(8.5, mid + 8.5);
  const double value = Kronrod::integrate(integrand, lo, mid, kMaxDepth, kTol) +
                       Kronrod::integrate(integrand, mid, hi, kMaxDepth, kTol);
  return std::clamp(static_cast<double>(k) * value, 0.0, 1.0);
}

// log density of s = sqrt(chi^2_df / df).
double log_scale_density(double s, double df) {
  const double half = df / 2.0;
  double v = std::log(2.0) + half * std::log(half) - std::lgamma(half) - half * s * s;
  if (df != 1.0) v += (df - 1.0) * std::log(s);
  return v;
}

void check_args(int k, double df) {
  if (k < 2) throw InputError(fmt::format("studentized range needs k >= 2, got {}", k));
  if (!(df > 0.0)) throw InputError(fmt::format("studentized range needs df > 0, got {}", df));
}

}  // namespace

double studentized_range_cdf(double q, int k, double df) {
  check_args(k, df);
  if (!(q > 0.0)) return 0.0;
  if (std::isinf(df)) return range_cdf(q, k);

  const double mode = df > 1.0 ? std::sqrt((df - 1.0) / df) : 0.0;
  const double step = 1.0 / std::sqrt(2.0 * df);
  const double peak = log_scale_density(std::max(mode, 1e-300), df);
  constexpr double kDrop = 60.0;  // e^-60 relative to the peak is negligible

  double hi = mode + step;
  while (log_scale_density(hi, df) > peak - kDrop) hi += step;
  double lo = mode;
  while (lo > 0.0 && log_scale_density(lo, df) > peak - kDrop) lo = std::max(0.0, lo - step);

  auto integrand = [&](double s) {
    if (s <= 0.0) return 0.0;
    return std::exp(log_scale_density(s, df)) * range_cdf(q * s, k);
  };
  double total = Kronrod::integrate(integrand, mode, hi, kMaxDepth, kTol);
  if (mode > lo) total += Kronrod::integrate(integrand, lo, mode, kMaxDepth, kTol);
  return std::clamp(total, 0.0, 1.0);
}

double studentized_range_sf(double q, int k, double df) {
  return std::clamp(1.0 - studentized_range_cdf(q, k, df), 0.0, 1.0);
}

double studentized_range_quantile(double p, int k, double df) {
  check_args(k, df);
  if (!(p > 0.0 && p < 1.0)) throw InputError(fmt::format("quantile level {} outside (0, 1)", p));
  double hi = 1.0;
  while (studentized_range_cdf(hi, k, df) < p) {
    hi *= 2.0;
    if (hi > 1e6) throw StatsError("studentized range quantile did not bracket");
  }
  const double lo = hi == 1.0 ? 0.0 : hi / 2.0;
  auto f = [&](double q) { return studentized_range_cdf(q, k, df) - p; };
  std::uintmax_t iters = 200;
  auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-11 * std::max(1.0, std::abs(a)); };
  const auto [a, b] = boost::math::tools::toms748_solve(f, lo, hi, f(lo), f(hi), tol, iters);
  return (a + b) / 2.0;
}

double f_distribution_sf(double f, double df1, double df2) {
  if (!(df1 > 0.0 && df2 > 0.0)) throw InputError("F distribution needs positive df");
  if (!(f > 0.0)) return 1.0;
  if (std::isinf(f)) return 0.0;
  // P(F > f) = I_x(df2/2, df1/2) with x = df2 / (df2 + df1 f).
  const double x = df2 / (df2 + df1 * f);
  return boost::math::ibeta(df2 / 2.0, df1 / 2.0, x);
}

}  // namespace laca::stats
