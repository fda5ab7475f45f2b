#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "laca/backend.hpp"
#include "laca/score_log.hpp"
#include "laca/stats/reliability.hpp"

namespace laca {

struct RunOptions {
  std::filesystem::path log_path;
  bool resume = false;
  std::size_t chunk_size = kDefaultChunkTokens;
  std::size_t parallelism = 1;
  double requests_per_second = 0.0;  // 0 disables rate limiting
  RetryPolicy retry;
  std::optional<std::uint64_t> seed;  // recorded in the metadata only
  std::string run_id;                 // derived from the inputs when empty
  // Stop after this many new rows (simulates an interrupted run).
  std::optional<std::size_t> max_new_rows;
};

struct RunSummary {
  ScoreSet scores;             // compacted contents of the log after the run
  std::size_t planned = 0;     // coders x candidates x total chunks
  std::size_t skipped = 0;     // already present on resume
  std::size_t written = 0;     // new rows this run
  std::size_t failed = 0;      // no reply obtained; not persisted
  std::size_t missing = 0;     // persisted rows whose value is MISSING
  bool complete() const { return scores.rows.size() == planned; }
};

// Codes every (coder, chunk, candidate) of `sample`, appending rows to the
// score log as they arrive, then compacts the log. With `resume`, keys
// already in the log are skipped. Throws BackendError if any item could not
// be coded (the partial log is kept and can be resumed) and AuthError on
// authentication failure.
RunSummary run(const std::vector<Transcript>& sample, std::span<const CoderConfig> coders,
               std::span<const Candidate> candidates, ChatBackend& backend,
               const RunOptions& options);

struct TranscriptKey {
  CoderId coder = CoderId::DZ;
  std::string transcript_id;
  Candidate candidate = Candidate::Biden;

  auto operator<=>(const TranscriptKey&) const = default;
};

struct TranscriptScore {
  std::optional<double> mean_value;  // nullopt when every chunk is MISSING
  std::size_t n_chunks = 0;
  std::size_t n_missing = 0;
};

using TranscriptScores = std::map<TranscriptKey, TranscriptScore>;

// Unweighted mean of the non-MISSING chunk values per (coder, transcript,
// candidate).
TranscriptScores aggregate(std::span<const SentimentScore> rows);

// A chunk response: one (chunk, candidate) prompt, rated by every coder.
struct UnitKey {
  std::string transcript_id;
  std::size_t chunk_index = 0;
  Candidate candidate = Candidate::Biden;

  auto operator<=>(const UnitKey&) const = default;
  std::string label() const;
};

struct ReliabilitySubset {
  std::vector<UnitKey> units;               // sorted
  std::map<Source, std::size_t> per_source;
  std::vector<SentimentScore> rows;         // every coder's row for every selected unit
};

inline constexpr std::size_t kDefaultSubsetTotal = 224;
inline constexpr std::size_t kDefaultSubsetPerSource = 112;

// Stratified uniform sample without replacement of `per_source` units from
// each source. Only units rated by every coder present in the set are
// eligible. Throws InputError when n_total != per_source * 2 or a stratum is
// too small.
ReliabilitySubset reliability_subset(const ScoreSet& scores,
                                     std::size_t n_total = kDefaultSubsetTotal,
                                     std::size_t per_source = kDefaultSubsetPerSource,
                                     std::uint64_t seed = 0);

// Units (chunk responses) x coders, in canonical coder order.
stats::RatingsTable ratings_table(std::span<const SentimentScore> rows);

}  // namespace laca
