#pragma once

namespace laca::stats {

// CDF of the studentized range Q for `k` means and `df` error degrees of
// freedom, by nested adaptive Gauss-Kronrod quadrature:
//
//   P(Q <= q) = int_0^inf f_df(s) W(q s) ds
//   W(w)      = k int phi(z) [Phi(z) - Phi(z - w)]^(k-1) dz
//
// where f_df is the density of sqrt(chi^2_df / df). An infinite `df` gives
// W(q) directly. Accurate to roughly 1e-10 absolute.
double studentized_range_cdf(double q, int k, double df);

// Upper tail 1 - CDF, clamped to [0, 1].
double studentized_range_sf(double q, int k, double df);

// Inverse CDF for p in (0, 1).
double studentized_range_quantile(double p, int k, double df);

// Upper tail of the F(df1, df2) distribution.
double f_distribution_sf(double f, double df1, double df2);

}  // namespace laca::stats
