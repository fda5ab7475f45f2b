#include "laca/stats/reliability.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

namespace laca::stats {

void RatingsTable::validate() const {
  if (values.size() != coders.size()) {
    throw InputError(fmt::format("ratings table has {} coders but {} value rows", coders.size(),
                                 values.size()));
  }
  for (std::size_t c = 0; c < values.size(); ++c) {
    if (values[c].size() != units.size()) {
      throw InputError(fmt::format("coder {} rates {} units, expected {}", to_string(coders[c]),
                                   values[c].size(), units.size()));
    }
  }
}

std::size_t RatingsTable::coder_index(CoderId id) const {
  auto it = std::find(coders.begin(), coders.end(), id);
  if (it == coders.end()) {
    throw InputError(fmt::format("coder {} is not in the ratings table", to_string(id)));
  }
  return static_cast<std::size_t>(it - coders.begin());
}

AlphaResult krippendorff_alpha_ordinal(const std::vector<std::vector<Rating>>& coder_values) {
  const std::size_t n_units = coder_values.empty() ? 0 : coder_values.front().size();
  for (const auto& row : coder_values) {
    if (row.size() != n_units) throw InputError("ragged ratings matrix");
  }

  // Category index over the pairable values only.
  std::vector<int> categories;
  std::vector<std::vector<int>> unit_values;
  for (std::size_t u = 0; u < n_units; ++u) {
    std::vector<int> vals;
    for (const auto& row : coder_values) {
      if (row[u]) vals.push_back(*row[u]);
    }
    if (vals.size() < 2) continue;
    categories.insert(categories.end(), vals.begin(), vals.end());
    unit_values.push_back(std::move(vals));
  }
  if (unit_values.empty()) throw NoUsableUnitsError("no unit has two or more ratings");
  std::sort(categories.begin(), categories.end());
  categories.erase(std::unique(categories.begin(), categories.end()), categories.end());
  const std::size_t k = categories.size();
  auto cat = [&](int v) {
    return static_cast<std::size_t>(std::lower_bound(categories.begin(), categories.end(), v) -
                                    categories.begin());
  };

  // Coincidence matrix: o[c][d] += n_uc * n_ud / (m_u - 1), with n_uc(n_uc - 1) on the diagonal.
  std::vector<std::vector<double>> o(k, std::vector<double>(k, 0.0));
  std::vector<double> counts(k);
  std::size_t n_values = 0;
  for (const auto& vals : unit_values) {
    std::fill(counts.begin(), counts.end(), 0.0);
    for (int v : vals) counts[cat(v)] += 1.0;
    const double m = static_cast<double>(vals.size());
    n_values += vals.size();
    for (std::size_t c = 0; c < k; ++c) {
      if (counts[c] == 0.0) continue;
      for (std::size_t d = 0; d < k; ++d) {
        const double pairs = c == d ? counts[c] * (counts[c] - 1.0) : counts[c] * counts[d];
        o[c][d] += pairs / (m - 1.0);
      }
    }
  }

  std::vector<double> marginal(k, 0.0);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d) marginal[c] += o[c][d];
  }
  const double n = static_cast<double>(n_values);

  // Ordinal metric: (sum_{g=c..d} n_g - (n_c + n_d) / 2)^2.
  std::vector<double> cumulative(k + 1, 0.0);
  for (std::size_t c = 0; c < k; ++c) cumulative[c + 1] = cumulative[c] + marginal[c];
  auto delta2 = [&](std::size_t c, std::size_t d) {
    if (c > d) std::swap(c, d);
    const double span = cumulative[d + 1] - cumulative[c] - (marginal[c] + marginal[d]) / 2.0;
    return span * span;
  };

  double observed = 0.0;
  double expected = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t d = 0; d < k; ++d) {
      if (c == d) continue;
      const double w = delta2(c, d);
      observed += o[c][d] * w;
      expected += marginal[c] * marginal[d] * w;
    }
  }
  if (expected == 0.0) {
    throw ZeroExpectedDisagreementError("all pairable ratings share one value; alpha is undefined");
  }

  AlphaResult r;
  r.n_units = unit_values.size();
  r.n_values = n_values;
  r.observed_disagreement = observed / n;
  r.expected_disagreement = expected / (n * (n - 1.0));
  r.alpha = 1.0 - (n - 1.0) * observed / expected;
  return r;
}

AlphaResult krippendorff_alpha_ordinal(const RatingsTable& table,
                                       std::optional<std::pair<CoderId, CoderId>> pair) {
  table.validate();
  if (!pair) return krippendorff_alpha_ordinal(table.values);
  return krippendorff_alpha_ordinal(std::vector<std::vector<Rating>>{
      table.values[table.coder_index(pair->first)], table.values[table.coder_index(pair->second)]});
}

const ReliabilityEntry& ReliabilityMatrix::at(CoderId a, CoderId b) const {
  for (const auto& e : entries) {
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return e;
  }
  throw InputError(fmt::format("no reliability entry for ({}, {})", to_string(a), to_string(b)));
}

ReliabilityMatrix pairwise_reliability(const RatingsTable& table, const std::vector<CoderId>& coders) {
  table.validate();
  ReliabilityMatrix m;
  m.coders = coders;
  for (const auto& [a, b] : coder_pairs(coders)) {
    ReliabilityEntry e;
    e.a = a;
    e.b = b;
    e.label = pair_label(a, b);
    try {
      const auto r = krippendorff_alpha_ordinal(table, std::pair{a, b});
      e.alpha = r.alpha;
      e.n_units = r.n_units;
    } catch (const StatsError& err) {
      e.note = err.what();
    }
    m.entries.push_back(std::move(e));
  }
  return m;
}

}  // namespace laca::stats
