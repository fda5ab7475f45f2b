#include "laca/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include <fmt/format.h>

#include "laca/error.hpp"
#include "laca/random.hpp"

namespace laca {
namespace {

struct WorkItem {
  const CoderConfig* config;
  const Chunk* chunk;
  Source source;
  Candidate candidate;
};

// Spaces request starts at least 1/rate seconds apart across all workers.
class RateLimiter {
 public:
  explicit RateLimiter(double per_second)
      : interval_(per_second > 0.0 ? std::chrono::duration_cast<Clock::duration>(
                                         std::chrono::duration<double>(1.0 / per_second))
                                   : Clock::duration::zero()) {}

  void acquire() {
    if (interval_ == Clock::duration::zero()) return;
    Clock::time_point slot;
    {
      std::lock_guard lock(mu_);
      const auto now = Clock::now();
      next_ = std::max(next_, now);
      slot = next_;
      next_ += interval_;
    }
    std::this_thread::sleep_until(slot);
  }

 private:
  using Clock = std::chrono::steady_clock;
  Clock::duration interval_;
  Clock::time_point next_{};
  std::mutex mu_;
};

std::string derive_run_id(const std::string& prompt_hash, std::optional<std::uint64_t> seed,
                          std::string_view backend, std::span<const CoderConfig> coders) {
  std::uint64_t h = fnv1a64(prompt_hash);
  h = fnv1a64(backend, h);
  h = mix64(h ^ (seed ? *seed : 0x5eedULL));
  for (const auto& c : coders) {
    h = fnv1a64(to_string(c.id), h);
    h = fnv1a64(c.base_model, h);
  }
  return "run-" + hex64(h).substr(0, 12);
}

}  // namespace

RunSummary run(const std::vector<Transcript>& sample, std::span<const CoderConfig> coders,
               std::span<const Candidate> candidates, ChatBackend& backend,
               const RunOptions& options) {
  if (sample.empty()) throw InputError("coding run needs a nonempty sample");
  if (coders.empty()) throw InputError("coding run needs at least one coder");
  if (candidates.empty()) throw InputError("coding run needs at least one candidate");
  for (const auto& c : coders) c.validate();

  std::vector<std::vector<Chunk>> chunks;
  chunks.reserve(sample.size());
  RunMetadata meta;
  for (const auto& t : sample) {
    chunks.push_back(chunk(t, options.chunk_size));
    if (!meta.transcript_sources.emplace(t.id, t.source).second) {
      throw InputError(fmt::format("transcript id '{}' appears twice in the sample", t.id));
    }
  }

  meta.prompt_template_version = std::string(kPromptTemplateVersion);
  meta.prompt_hash = prompt_template_hash();
  meta.seed = options.seed;
  meta.backend = std::string(backend.name());
  meta.chunk_size = options.chunk_size;
  meta.run_id = options.run_id.empty()
                    ? derive_run_id(meta.prompt_hash, options.seed, backend.name(), coders)
                    : options.run_id;
  meta.started_at = utc_timestamp();

  std::set<ScoreKey> done;
  const bool have_log = std::filesystem::exists(options.log_path);
  if (options.resume && have_log) {
    if (std::filesystem::exists(metadata_path(options.log_path))) {
      const auto previous = load_metadata(options.log_path);
      if (previous.prompt_hash != meta.prompt_hash) {
        throw ConfigError(fmt::format("score log '{}' was written with prompt hash {}, not {}",
                                      options.log_path.string(), previous.prompt_hash,
                                      meta.prompt_hash));
      }
      if (previous.chunk_size != 0 && previous.chunk_size != meta.chunk_size) {
        throw ConfigError(fmt::format("score log '{}' used chunk size {}, not {}",
                                      options.log_path.string(), previous.chunk_size,
                                      meta.chunk_size));
      }
      meta.started_at = previous.started_at;
      meta.run_id = previous.run_id;
      for (const auto& [id, src] : previous.transcript_sources) {
        meta.transcript_sources.emplace(id, src);
      }
    }
    for (const auto& row : read_score_rows(options.log_path)) done.insert(key_of(row));
  }
  meta.updated_at = meta.started_at;
  save_metadata(options.log_path, meta);

  RunSummary summary;
  std::vector<WorkItem> items;
  for (std::size_t t = 0; t < sample.size(); ++t) {
    for (const auto& ch : chunks[t]) {
      for (const auto& config : coders) {
        for (auto cand : candidates) {
          ++summary.planned;
          if (done.contains(ScoreKey{config.id, ch.transcript_id, ch.index, cand})) {
            ++summary.skipped;
            continue;
          }
          items.push_back({&config, &ch, sample[t].source, cand});
        }
      }
    }
  }

  ScoreLogWriter writer(options.log_path, options.resume);
  RateLimiter limiter(options.requests_per_second);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex state_mu;
  std::size_t accepted = 0;
  std::vector<std::string> failures;
  std::exception_ptr fatal;

  auto worker = [&] {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= items.size()) return;
      const auto& item = items[i];
      try {
        limiter.acquire();
        auto outcome = code_chunk(backend, *item.config, *item.chunk, item.source, item.candidate,
                                  options.retry);
        std::lock_guard lock(state_mu);
        if (outcome.failed) {
          ++summary.failed;
          failures.push_back(fmt::format("{} {}#{} {}: {}", to_string(item.config->id),
                                         item.chunk->transcript_id, item.chunk->index,
                                         to_string(item.candidate), outcome.diagnostic));
          continue;
        }
        if (options.max_new_rows && accepted >= *options.max_new_rows) {
          stop = true;
          return;
        }
        ++accepted;
        if (!outcome.score.value) ++summary.missing;
        writer.append(outcome.score);
      } catch (...) {
        std::lock_guard lock(state_mu);
        if (!fatal) fatal = std::current_exception();
        stop = true;
        return;
      }
    }
  };

  const std::size_t n_threads = std::clamp<std::size_t>(options.parallelism, 1, std::max<std::size_t>(items.size(), 1));
  {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  summary.written = writer.written();

  summary.scores.rows = compact(read_score_rows(options.log_path));
  write_score_rows(options.log_path, summary.scores.rows);
  meta.updated_at = utc_timestamp();
  save_metadata(options.log_path, meta);
  summary.scores.metadata = meta;

  if (fatal) std::rethrow_exception(fatal);
  if (summary.failed > 0) {
    throw BackendError(fmt::format(
        "{} of {} requests got no reply (first: {}); {} rows persisted, rerun with resume",
        summary.failed, items.size(), failures.front(), summary.scores.rows.size()));
  }
  return summary;
}

TranscriptScores aggregate(std::span<const SentimentScore> rows) {
  std::map<TranscriptKey, std::pair<double, std::size_t>> sums;
  TranscriptScores out;
  for (const auto& r : rows) {
    TranscriptKey key{r.coder, r.transcript_id, r.candidate};
    auto& agg = out[key];
    ++agg.n_chunks;
    auto& [sum, n] = sums[key];
    if (r.value) {
      sum += *r.value;
      ++n;
    } else {
      ++agg.n_missing;
    }
  }
  for (auto& [key, agg] : out) {
    const auto& [sum, n] = sums[key];
    if (n > 0) agg.mean_value = sum / static_cast<double>(n);
  }
  return out;
}

std::string UnitKey::label() const {
  return fmt::format("{}#{}/{}", transcript_id, chunk_index, to_string(candidate));
}

ReliabilitySubset reliability_subset(const ScoreSet& scores, std::size_t n_total,
                                     std::size_t per_source, std::uint64_t seed) {
  if (per_source == 0 || n_total != per_source * kAllSources.size()) {
    throw InputError(fmt::format(
        "subset size {} must equal {} per source x {} sources", n_total, per_source,
        kAllSources.size()));
  }
  std::set<CoderId> coders;
  std::map<UnitKey, std::set<CoderId>> raters;
  for (const auto& r : scores.rows) {
    coders.insert(r.coder);
    raters[{r.transcript_id, r.chunk_index, r.candidate}].insert(r.coder);
  }

  ReliabilitySubset out;
  std::set<UnitKey> chosen;
  for (std::size_t s = 0; s < kAllSources.size(); ++s) {
    const auto source = kAllSources[s];
    std::vector<UnitKey> eligible;
    for (const auto& [unit, who] : raters) {
      if (who.size() == coders.size() && scores.source_of(unit.transcript_id) == source) {
        eligible.push_back(unit);
      }
    }
    if (eligible.size() < per_source) {
      throw InputError(fmt::format("stratum {} has {} complete chunk responses; {} requested",
                                   to_string(source), eligible.size(), per_source));
    }
    for (auto i : sample_indices(eligible.size(), per_source, mix64(seed + s))) {
      chosen.insert(eligible[i]);
    }
    out.per_source[source] = per_source;
  }
  out.units.assign(chosen.begin(), chosen.end());
  for (const auto& r : scores.rows) {
    if (chosen.contains(UnitKey{r.transcript_id, r.chunk_index, r.candidate})) out.rows.push_back(r);
  }
  return out;
}

stats::RatingsTable ratings_table(std::span<const SentimentScore> rows) {
  std::set<UnitKey> units;
  std::set<CoderId> coders;
  for (const auto& r : rows) {
    units.insert({r.transcript_id, r.chunk_index, r.candidate});
    coders.insert(r.coder);
  }
  stats::RatingsTable table;
  table.coders.assign(coders.begin(), coders.end());
  std::map<UnitKey, std::size_t> unit_index;
  for (const auto& u : units) {
    unit_index.emplace(u, table.units.size());
    table.units.push_back(u.label());
  }
  table.values.assign(table.coders.size(), std::vector<stats::Rating>(table.units.size()));
  for (const auto& r : rows) {
    const auto c = table.coder_index(r.coder);
    table.values[c][unit_index.at({r.transcript_id, r.chunk_index, r.candidate})] = r.value;
  }
  return table;
}

}  // namespace laca
