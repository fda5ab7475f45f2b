#pragma once

#include <span>

namespace laca::stats {

// Order-1 Wasserstein distance between the empirical distributions of `a`
// and `b`: the integral of |F_a(x) - F_b(x)| over the merged breakpoints.
// Exact for step CDFs of any sizes. Throws InputError on empty input.
double wasserstein_1d(std::span<const double> a, std::span<const double> b);

}  // namespace laca::stats
