#include "laca/stats/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "laca/error.hpp"

namespace laca::stats {

double wasserstein_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InputError("wasserstein_1d needs two nonempty samples");
  std::vector<double> xa(a.begin(), a.end());
  std::vector<double> xb(b.begin(), b.end());
  std::sort(xa.begin(), xa.end());
  std::sort(xb.begin(), xb.end());

  // Work with integer counts and scale once at the end: with F_a = ca/na and
  // F_b = cb/nb, |F_a - F_b| = |ca*nb - cb*na| / (na*nb).
  const auto na = static_cast<std::int64_t>(xa.size());
  const auto nb = static_cast<std::int64_t>(xb.size());
  std::int64_t ca = 0;
  std::int64_t cb = 0;
  std::size_t ia = 0;
  std::size_t ib = 0;
  double x = std::min(xa.front(), xb.front());
  double total = 0.0;
  while (ia < xa.size() || ib < xb.size()) {
    // Consume every sample at the current breakpoint.
    while (ia < xa.size() && xa[ia] == x) ++ia, ++ca;
    while (ib < xb.size() && xb[ib] == x) ++ib, ++cb;
    if (ia == xa.size() && ib == xb.size()) break;
    double next;
    if (ia == xa.size()) {
      next = xb[ib];
    } else if (ib == xb.size()) {
      next = xa[ia];
    } else {
      next = std::min(xa[ia], xb[ib]);
    }
    const auto gap = ca * nb - cb * na;
    total += static_cast<double>(gap < 0 ? -gap : gap) * (next - x);
    x = next;
  }
  return total / (static_cast<double>(na) * static_cast<double>(nb));
}

}  // namespace laca::stats
