#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "laca/types.hpp"

namespace laca {

using Date = std::chrono::year_month_day;

// Strict YYYY-MM-DD. Throws InputError on malformed or impossible dates.
Date parse_date(std::string_view text);
std::string format_date(Date d);

struct Transcript {
  std::string id;
  Source source = Source::FoxNews;
  Date air_date;
  std::string text;
  std::size_t word_count = 0;  // whitespace-delimited tokens of `text`
};

struct Chunk {
  std::string transcript_id;
  std::size_t index = 0;
  std::string text;  // words of the parent joined by single spaces
  std::size_t word_count = 0;
  std::size_t approx_tokens = 0;
};

struct DateRange {
  Date from;
  Date to;  // inclusive
};

struct WordCountRange {
  std::size_t low = 0;
  std::size_t high = 0;  // inclusive
};

struct FilterCriteria {
  std::optional<DateRange> date_range;
  std::vector<std::string> required_terms;  // all must occur, case-insensitive
  std::optional<WordCountRange> wc_range;

  // Throws InputError when a range is inverted.
  void validate() const;
};

struct CorpusStats {
  std::size_t count = 0;
  double mean_word_count = 0.0;
};

// A validated, single-source set of transcripts with unique ids.
class Corpus {
 public:
  Corpus(Source source, std::vector<Transcript> transcripts);

  Source source() const { return source_; }
  const std::vector<Transcript>& transcripts() const { return transcripts_; }
  std::size_t size() const { return transcripts_.size(); }
  CorpusStats stats() const;

 private:
  Source source_;
  std::vector<Transcript> transcripts_;
};

// Line-delimited JSON, one {id, source, date, text} object per line. `source`
// is optional per record but must agree with `source` when present. Blank
// lines are skipped. Errors carry the 1-based line number.
Corpus ingest(const std::filesystem::path& path, Source source);
Corpus ingest(std::istream& in, Source source, std::string_view name = "<stream>");

// Inverse of ingest: one {id, source, date, text} object per line.
void write_transcripts(const std::filesystem::path& path, const std::vector<Transcript>& transcripts);

std::vector<Transcript> filter(const std::vector<Transcript>& transcripts,
                               const FilterCriteria& criteria);

// Subsamples the larger set (uniformly, without replacement, order preserved)
// down to the size of the smaller one. Throws InputError if either is empty.
std::pair<std::vector<Transcript>, std::vector<Transcript>> equalize(
    const std::vector<Transcript>& a, const std::vector<Transcript>& b, std::uint64_t seed);

std::vector<std::string_view> split_words(std::string_view text);
std::size_t count_words(std::string_view text);

// Offline stand-in for a subword tokenizer: ceil(words * 4 / 3).
std::size_t approx_tokens_for_words(std::size_t words);
std::size_t approx_tokens(std::string_view text);

inline constexpr std::size_t kDefaultChunkTokens = 2000;

// Greedy word-boundary packing: each chunk takes as many words as fit under
// `chunk_size` approximate tokens.
std::vector<Chunk> chunk(const Transcript& transcript, std::size_t chunk_size = kDefaultChunkTokens);

}  // namespace laca
