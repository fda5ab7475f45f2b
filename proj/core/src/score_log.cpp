#include "laca/score_log.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <set>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <json.hpp>

#include "csv.hpp"
#include "laca/error.hpp"

namespace laca {

ScoreKey key_of(const SentimentScore& s) {
  return {s.coder, s.transcript_id, s.chunk_index, s.candidate};
}

Source ScoreSet::source_of(const std::string& transcript_id) const {
  auto it = metadata.transcript_sources.find(transcript_id);
  if (it == metadata.transcript_sources.end()) {
    throw InputError(fmt::format("no source recorded for transcript '{}'", transcript_id));
  }
  return it->second;
}

std::filesystem::path metadata_path(const std::filesystem::path& log_path) {
  auto p = log_path;
  p += ".meta.json";
  return p;
}

std::string format_score_row(const SentimentScore& s) {
  return csv::join({std::string(to_string(s.coder)), s.transcript_id,
                    std::to_string(s.chunk_index), std::string(to_string(s.candidate)),
                    s.value ? std::to_string(*s.value) : std::string(), s.raw_response});
}

std::vector<SentimentScore> read_score_rows(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageError(fmt::format("cannot open score log '{}'", path.string()));
  return read_score_rows(in, path.string());
}

std::vector<SentimentScore> read_score_rows(std::istream& in, std::string_view name) {
  std::vector<SentimentScore> rows;
  std::size_t line = 0;
  auto header = csv::read_record(in, line);
  if (!header) return rows;
  if (csv::join(*header) != kScoreLogHeader) {
    throw InputError(fmt::format("{}: unexpected score log header", name));
  }
  while (true) {
    const std::size_t first_line = line + 1;
    std::optional<std::vector<std::string>> rec;
    try {
      rec = csv::read_record(in, line);
    } catch (const InputError&) {
      // A torn final row from an interrupted writer; everything before it is intact.
      break;
    }
    if (!rec) break;
    if (rec->size() == 1 && rec->front().empty()) continue;
    auto fail = [&](std::string_view what) {
      return InputError(fmt::format("{}:{}: {}", name, first_line, what));
    };
    if (rec->size() != 6) throw fail(fmt::format("expected 6 fields, found {}", rec->size()));
    SentimentScore s;
    try {
      s.coder = parse_coder_id((*rec)[0]);
      s.candidate = parse_candidate((*rec)[3]);
    } catch (const InputError& e) {
      throw fail(e.what());
    }
    s.transcript_id = (*rec)[1];
    const auto& idx = (*rec)[2];
    auto [p1, e1] = std::from_chars(idx.data(), idx.data() + idx.size(), s.chunk_index);
    if (e1 != std::errc{} || p1 != idx.data() + idx.size()) throw fail("bad chunk_index");
    const auto& val = (*rec)[4];
    if (!val.empty()) {
      int v = 0;
      auto [p2, e2] = std::from_chars(val.data(), val.data() + val.size(), v);
      if (e2 != std::errc{} || p2 != val.data() + val.size() || v < kScoreMin || v > kScoreMax) {
        throw fail(fmt::format("bad value '{}'", val));
      }
      s.value = v;
    }
    s.raw_response = (*rec)[5];
    rows.push_back(std::move(s));
  }
  return rows;
}

std::vector<SentimentScore> compact(std::vector<SentimentScore> rows) {
  std::set<ScoreKey> seen;
  std::vector<SentimentScore> out;
  out.reserve(rows.size());
  for (auto& r : rows) {
    if (seen.insert(key_of(r)).second) out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(),
            [](const SentimentScore& a, const SentimentScore& b) { return key_of(a) < key_of(b); });
  return out;
}

void write_score_rows(const std::filesystem::path& path, const std::vector<SentimentScore>& rows) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StorageError(fmt::format("cannot write '{}'", tmp.string()));
    out << kScoreLogHeader << '\n';
    for (const auto& r : rows) out << format_score_row(r) << '\n';
    out.flush();
    if (!out) throw StorageError(fmt::format("write to '{}' failed", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw StorageError(fmt::format("cannot replace '{}': {}", path.string(), ec.message()));
}

void save_metadata(const std::filesystem::path& log_path, const RunMetadata& meta) {
  nlohmann::ordered_json j;
  j["run_id"] = meta.run_id;
  j["prompt_template_version"] = meta.prompt_template_version;
  j["prompt_hash"] = meta.prompt_hash;
  j["seed"] = meta.seed ? nlohmann::ordered_json(*meta.seed) : nlohmann::ordered_json(nullptr);
  j["backend"] = meta.backend;
  j["chunk_size"] = meta.chunk_size;
  j["started_at"] = meta.started_at;
  j["updated_at"] = meta.updated_at;
  auto& sources = j["transcript_sources"];
  sources = nlohmann::ordered_json::object();
  for (const auto& [id, src] : meta.transcript_sources) sources[id] = to_string(src);

  const auto path = metadata_path(log_path);
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StorageError(fmt::format("cannot write '{}'", tmp.string()));
    out << j.dump(2) << '\n';
    if (!out) throw StorageError(fmt::format("write to '{}' failed", tmp.string()));
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw StorageError(fmt::format("cannot replace '{}': {}", path.string(), ec.message()));
}

RunMetadata load_metadata(const std::filesystem::path& log_path) {
  const auto path = metadata_path(log_path);
  std::ifstream in(path);
  if (!in) throw StorageError(fmt::format("cannot open run metadata '{}'", path.string()));
  RunMetadata m;
  try {
    const auto j = nlohmann::json::parse(in);
    m.run_id = j.at("run_id").get<std::string>();
    m.prompt_template_version = j.value("prompt_template_version", "");
    m.prompt_hash = j.at("prompt_hash").get<std::string>();
    if (j.contains("seed") && !j["seed"].is_null()) m.seed = j["seed"].get<std::uint64_t>();
    m.backend = j.value("backend", "");
    m.chunk_size = j.value("chunk_size", std::size_t{0});
    m.started_at = j.value("started_at", "");
    m.updated_at = j.value("updated_at", "");
    for (const auto& [id, src] : j.at("transcript_sources").items()) {
      m.transcript_sources[id] = parse_source(src.get<std::string>());
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(fmt::format("{}: malformed run metadata: {}", path.string(), e.what()));
  }
  return m;
}

ScoreSet load_score_set(const std::filesystem::path& log_path) {
  ScoreSet set;
  set.metadata = load_metadata(log_path);
  set.rows = compact(read_score_rows(log_path));
  return set;
}

ScoreLogWriter::ScoreLogWriter(const std::filesystem::path& path, bool append_existing)
    : path_(path) {
  const bool fresh = !append_existing || !std::filesystem::exists(path) ||
                     std::filesystem::file_size(path) == 0;
  bool needs_newline = false;
  if (!fresh) {
    std::ifstream tail(path, std::ios::binary | std::ios::ate);
    if (tail && tail.tellg() > 0) {
      tail.seekg(-1, std::ios::end);
      needs_newline = tail.get() != '\n';
    }
  }
  out_.open(path, std::ios::binary | (fresh ? std::ios::trunc : std::ios::app));
  if (!out_) throw StorageError(fmt::format("cannot open score log '{}' for writing", path.string()));
  if (needs_newline) out_ << '\n';
  if (fresh) {
    out_ << kScoreLogHeader << '\n';
    out_.flush();
  }
  if (!out_) throw StorageError(fmt::format("write to '{}' failed", path.string()));
}

void ScoreLogWriter::append(const SentimentScore& score) {
  const auto line = format_score_row(score);
  std::lock_guard lock(mu_);
  out_ << line << '\n';
  out_.flush();
  if (!out_) throw StorageError(fmt::format("write to '{}' failed", path_.string()));
  ++written_;
}

std::size_t ScoreLogWriter::written() const {
  std::lock_guard lock(mu_);
  return written_;
}

std::string utc_timestamp() {
  const auto now = std::chrono::time_point_cast<std::chrono::seconds>(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(now)));
}

}  // namespace laca
