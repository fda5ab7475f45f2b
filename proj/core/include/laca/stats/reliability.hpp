#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "laca/error.hpp"
#include "laca/taxonomy.hpp"
#include "laca/types.hpp"

namespace laca::stats {

class NoUsableUnitsError : public StatsError {
 public:
  using StatsError::StatsError;
};

// Every pairable value is the same category, so expected disagreement is
// zero and alpha is undefined.
class ZeroExpectedDisagreementError : public StatsError {
 public:
  using StatsError::StatsError;
};

using Rating = std::optional<int>;

// values[c][u] is coder c's rating of unit u (nullopt when missing).
struct RatingsTable {
  std::vector<std::string> units;
  std::vector<CoderId> coders;
  std::vector<std::vector<Rating>> values;

  // Throws InputError on ragged or mismatched dimensions.
  void validate() const;
  std::size_t coder_index(CoderId id) const;
};

struct AlphaResult {
  double alpha = 0.0;
  std::size_t n_units = 0;   // units with >= 2 pairable values
  std::size_t n_values = 0;  // pairable values
  double observed_disagreement = 0.0;
  double expected_disagreement = 0.0;
};

// Krippendorff's alpha with the ordinal difference function, computed from
// the coincidence matrix. Units with fewer than two ratings are dropped.
AlphaResult krippendorff_alpha_ordinal(const std::vector<std::vector<Rating>>& coder_values);

// Over all coders of `table`, or only the two in `pair`.
AlphaResult krippendorff_alpha_ordinal(const RatingsTable& table,
                                       std::optional<std::pair<CoderId, CoderId>> pair = {});

struct ReliabilityEntry {
  CoderId a = CoderId::DZ;
  CoderId b = CoderId::DZ;
  std::optional<double> alpha;  // nullopt when undefined for this pair
  std::size_t n_units = 0;
  PairLabel label = PairLabel::Mixed;
  std::string note;  // why alpha is undefined
};

struct ReliabilityMatrix {
  std::vector<CoderId> coders;
  std::vector<ReliabilityEntry> entries;  // one per unordered pair

  const ReliabilityEntry& at(CoderId a, CoderId b) const;  // order-insensitive
};

// Per-pair alpha on each pair's own pairable units. Per-pair failures become
// undefined entries rather than errors.
ReliabilityMatrix pairwise_reliability(const RatingsTable& table, const std::vector<CoderId>& coders);

}  // namespace laca::stats
