#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "laca/coders.hpp"

namespace laca {

inline constexpr std::string_view kScoreLogHeader =
    "coder_id,transcript_id,chunk_index,candidate,value,raw_response";

// Sidecar (<log>.meta.json) describing the run that produced a score log.
struct RunMetadata {
  std::string run_id;
  std::string prompt_template_version;
  std::string prompt_hash;
  std::optional<std::uint64_t> seed;
  std::string backend;
  std::size_t chunk_size = 0;
  std::string started_at;  // ISO-8601 UTC
  std::string updated_at;
  std::map<std::string, Source> transcript_sources;
};

struct ScoreKey {
  CoderId coder = CoderId::DZ;
  std::string transcript_id;
  std::size_t chunk_index = 0;
  Candidate candidate = Candidate::Biden;

  auto operator<=>(const ScoreKey&) const = default;
};

ScoreKey key_of(const SentimentScore& s);

struct ScoreSet {
  RunMetadata metadata;
  std::vector<SentimentScore> rows;

  Source source_of(const std::string& transcript_id) const;  // throws InputError
};

std::filesystem::path metadata_path(const std::filesystem::path& log_path);

// One CSV line (no trailing newline) in kScoreLogHeader column order.
std::string format_score_row(const SentimentScore& s);

std::vector<SentimentScore> read_score_rows(const std::filesystem::path& path);
std::vector<SentimentScore> read_score_rows(std::istream& in, std::string_view name = "<stream>");

// Drops later duplicates of a key and sorts by key.
std::vector<SentimentScore> compact(std::vector<SentimentScore> rows);

// Atomically replaces `path` (write to a temporary, then rename).
void write_score_rows(const std::filesystem::path& path, const std::vector<SentimentScore>& rows);

void save_metadata(const std::filesystem::path& log_path, const RunMetadata& meta);
RunMetadata load_metadata(const std::filesystem::path& log_path);

// Rows plus sidecar metadata.
ScoreSet load_score_set(const std::filesystem::path& log_path);

// Append-only writer. append() is safe to call from several threads; rows
// are flushed one at a time so an interrupted run loses at most the row in
// flight.
class ScoreLogWriter {
 public:
  // Truncates unless `append_existing`; writes the header to a new file.
  ScoreLogWriter(const std::filesystem::path& path, bool append_existing);

  void append(const SentimentScore& score);
  std::size_t written() const;

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  mutable std::mutex mu_;
  std::size_t written_ = 0;
};

std::string utc_timestamp();

}  // namespace laca
