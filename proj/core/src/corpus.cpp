#include "laca/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <unordered_set>

#include <fmt/format.h>
#include <json.hpp>

#include "laca/error.hpp"
#include "laca/random.hpp"

namespace laca {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

int parse_int_field(std::string_view text) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return -1;
  return value;
}

}  // namespace

Date parse_date(std::string_view text) {
  const bool shape_ok = text.size() == 10 && text[4] == '-' && text[7] == '-' &&
                        std::all_of(text.begin(), text.end(), [](char c) {
                          return c == '-' || std::isdigit(static_cast<unsigned char>(c));
                        });
  if (shape_ok) {
    const int y = parse_int_field(text.substr(0, 4));
    const int m = parse_int_field(text.substr(5, 2));
    const int d = parse_int_field(text.substr(8, 2));
    const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                    std::chrono::day{static_cast<unsigned>(d)}};
    if (y >= 0 && m >= 1 && d >= 1 && date.ok()) return date;
  }
  throw InputError(fmt::format("unparsable date '{}' (expected YYYY-MM-DD)", text));
}

std::string format_date(Date d) {
  return fmt::format("{:04}-{:02}-{:02}", static_cast<int>(d.year()),
                     static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
}

void FilterCriteria::validate() const {
  if (date_range && date_range->from > date_range->to) {
    throw InputError(fmt::format("date range start {} is after end {}",
                                 format_date(date_range->from), format_date(date_range->to)));
  }
  if (wc_range && wc_range->low > wc_range->high) {
    throw InputError(fmt::format("word-count range [{}, {}] is inverted", wc_range->low,
                                 wc_range->high));
  }
}

Corpus::Corpus(Source source, std::vector<Transcript> transcripts)
    : source_(source), transcripts_(std::move(transcripts)) {
  std::unordered_set<std::string> seen;
  for (auto& t : transcripts_) {
    if (t.source != source_) {
      throw InputError(fmt::format("transcript '{}' is {} but the corpus is {}", t.id,
                                   to_string(t.source), to_string(source_)));
    }
    if (!seen.insert(t.id).second) {
      throw InputError(fmt::format("duplicate transcript id '{}'", t.id));
    }
    t.word_count = count_words(t.text);
  }
}

CorpusStats Corpus::stats() const {
  CorpusStats s;
  s.count = transcripts_.size();
  if (s.count == 0) return s;
  double total = 0.0;
  for (const auto& t : transcripts_) total += static_cast<double>(t.word_count);
  s.mean_word_count = total / static_cast<double>(s.count);
  return s;
}

Corpus ingest(const std::filesystem::path& path, Source source) {
  std::ifstream in(path);
  if (!in) throw StorageError(fmt::format("cannot open corpus file '{}'", path.string()));
  return ingest(in, source, path.string());
}

Corpus ingest(std::istream& in, Source source, std::string_view name) {
  std::vector<Transcript> out;
  std::unordered_set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (std::all_of(line.begin(), line.end(), is_space)) continue;

    auto fail = [&](std::string_view what) -> InputError {
      return InputError(fmt::format("{}:{}: {}", name, lineno, what));
    };

    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error&) {
      throw fail("malformed JSON record");
    }
    if (!rec.is_object()) throw fail("record is not an object");

    auto string_field = [&](const char* key) -> std::string {
      auto it = rec.find(key);
      if (it == rec.end()) {
        std::string who = rec.contains("id") && rec["id"].is_string()
                              ? fmt::format("record '{}'", rec["id"].get<std::string>())
                              : std::string("record");
        throw fail(fmt::format("{} is missing field '{}'", who, key));
      }
      if (!it->is_string()) throw fail(fmt::format("field '{}' must be a string", key));
      return it->get<std::string>();
    };

    Transcript t;
    t.id = string_field("id");
    t.text = string_field("text");
    const auto date_text = string_field("date");
    try {
      t.air_date = parse_date(date_text);
    } catch (const InputError& e) {
      throw fail(fmt::format("record '{}': {}", t.id, e.what()));
    }
    t.source = source;
    if (auto it = rec.find("source"); it != rec.end()) {
      if (!it->is_string()) throw fail("field 'source' must be a string");
      Source declared;
      try {
        declared = parse_source(it->get<std::string>());
      } catch (const InputError& e) {
        throw fail(fmt::format("record '{}': {}", t.id, e.what()));
      }
      if (declared != source) {
        throw fail(fmt::format("record '{}' declares source {} but ingest expects {}", t.id,
                               to_string(declared), to_string(source)));
      }
    }
    if (!seen.insert(t.id).second) throw fail(fmt::format("duplicate id '{}'", t.id));
    out.push_back(std::move(t));
  }
  return Corpus(source, std::move(out));
}

void write_transcripts(const std::filesystem::path& path, const std::vector<Transcript>& transcripts) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StorageError(fmt::format("cannot write '{}'", path.string()));
  for (const auto& t : transcripts) {
    nlohmann::ordered_json j{{"id", t.id},
                             {"source", to_string(t.source)},
                             {"date", format_date(t.air_date)},
                             {"text", t.text}};
    out << j.dump() << '\n';
  }
  out.flush();
  if (!out) throw StorageError(fmt::format("write to '{}' failed", path.string()));
}

std::vector<Transcript> filter(const std::vector<Transcript>& transcripts,
                               const FilterCriteria& criteria) {
  criteria.validate();
  std::vector<std::string> terms;
  terms.reserve(criteria.required_terms.size());
  for (const auto& t : criteria.required_terms) terms.push_back(ascii_lower(t));

  std::vector<Transcript> out;
  for (const auto& t : transcripts) {
    if (criteria.date_range &&
        (t.air_date < criteria.date_range->from || t.air_date > criteria.date_range->to)) {
      continue;
    }
    if (criteria.wc_range &&
        (t.word_count < criteria.wc_range->low || t.word_count > criteria.wc_range->high)) {
      continue;
    }
    if (!terms.empty()) {
      const auto haystack = ascii_lower(t.text);
      const bool all = std::all_of(terms.begin(), terms.end(), [&](const std::string& term) {
        return haystack.find(term) != std::string::npos;
      });
      if (!all) continue;
    }
    out.push_back(t);
  }
  return out;
}

std::pair<std::vector<Transcript>, std::vector<Transcript>> equalize(
    const std::vector<Transcript>& a, const std::vector<Transcript>& b, std::uint64_t seed) {
  if (a.empty() || b.empty()) throw InputError("equalize requires two nonempty sets");
  auto shrink = [seed](const std::vector<Transcript>& set, std::size_t n) {
    std::vector<Transcript> out;
    out.reserve(n);
    for (auto i : sample_indices(set.size(), n, seed)) out.push_back(set[i]);
    return out;
  };
  if (a.size() > b.size()) return {shrink(a, b.size()), b};
  if (b.size() > a.size()) return {a, shrink(b, a.size())};
  return {a, b};
}

std::vector<std::string_view> split_words(std::string_view text) {
  std::vector<std::string_view> words;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && is_space(text[i])) ++i;
    const std::size_t start = i;
    while (i < text.size() && !is_space(text[i])) ++i;
    if (i > start) words.push_back(text.substr(start, i - start));
  }
  return words;
}

std::size_t count_words(std::string_view text) {
  std::size_t n = 0;
  bool in_word = false;
  for (char c : text) {
    if (is_space(c)) {
      in_word = false;
    } else if (!in_word) {
      in_word = true;
      ++n;
    }
  }
  return n;
}

std::size_t approx_tokens_for_words(std::size_t words) { return (words * 4 + 2) / 3; }

std::size_t approx_tokens(std::string_view text) {
  return approx_tokens_for_words(count_words(text));
}

std::vector<Chunk> chunk(const Transcript& transcript, std::size_t chunk_size) {
  if (approx_tokens_for_words(1) > chunk_size) {
    throw InputError(fmt::format("chunk size {} cannot hold a single word", chunk_size));
  }
  const auto words = split_words(transcript.text);
  if (words.empty()) {
    throw InputError(fmt::format("transcript '{}' has empty text", transcript.id));
  }
  // Largest word count whose approximate token count still fits.
  std::size_t cap = (chunk_size * 3) / 4;
  while (approx_tokens_for_words(cap + 1) <= chunk_size) ++cap;
  while (approx_tokens_for_words(cap) > chunk_size) --cap;

  std::vector<Chunk> chunks;
  for (std::size_t begin = 0; begin < words.size(); begin += cap) {
    const std::size_t end = std::min(words.size(), begin + cap);
    Chunk c;
    c.transcript_id = transcript.id;
    c.index = chunks.size();
    for (std::size_t i = begin; i < end; ++i) {
      if (i > begin) c.text += ' ';
      c.text += words[i];
    }
    c.word_count = end - begin;
    c.approx_tokens = approx_tokens_for_words(c.word_count);
    chunks.push_back(std::move(c));
  }
  return chunks;
}

}  // namespace laca
