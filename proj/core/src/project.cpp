#include "laca/project.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "laca/coders.hpp"
#include "laca/mock_backend.hpp"
#include "laca/openai_backend.hpp"
#include "laca/pipeline.hpp"

namespace laca {
namespace {

using nlohmann::json;

std::string join_lines(const std::vector<std::string>& v) {
  std::string out = "invalid project config:";
  for (const auto& s : v) out += "\n  - " + s;
  return out;
}

// Walks the JSON tree, recording every problem instead of stopping.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& issues) : issues_(issues) {}

  void check_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    for (const auto& [k, _] : obj.items()) {
      bool ok = false;
      for (auto a : allowed) ok = ok || a == k;
      if (!ok) issues_.push_back(fmt::format("{}{}: unknown field", prefix(where), k));
    }
  }

  const json* object(const json& parent, std::string_view key, std::string_view where) {
    auto it = parent.find(key);
    if (it == parent.end() || it->is_null()) return nullptr;
    if (!it->is_object()) {
      issues_.push_back(fmt::format("{}{}: expected an object", prefix(where), key));
      return nullptr;
    }
    return &*it;
  }

  std::optional<std::string> string(const json& parent, std::string_view key, std::string_view where) {
    auto it = parent.find(key);
    if (it == parent.end() || it->is_null()) return std::nullopt;
    if (!it->is_string()) {
      issues_.push_back(fmt::format("{}{}: expected a string", prefix(where), key));
      return std::nullopt;
    }
    return it->get<std::string>();
  }

  std::optional<std::uint64_t> unsigned_int(const json& parent, std::string_view key, std::string_view where) {
    auto it = parent.find(key);
    if (it == parent.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_unsigned()) {
      issues_.push_back(fmt::format("{}{}: expected a non-negative integer", prefix(where), key));
      return std::nullopt;
    }
    return it->get<std::uint64_t>();
  }

  std::optional<double> number(const json& parent, std::string_view key, std::string_view where) {
    auto it = parent.find(key);
    if (it == parent.end() || it->is_null()) return std::nullopt;
    if (!it->is_number()) {
      issues_.push_back(fmt::format("{}{}: expected a number", prefix(where), key));
      return std::nullopt;
    }
    return it->get<double>();
  }

  std::optional<bool> boolean(const json& parent, std::string_view key, std::string_view where) {
    auto it = parent.find(key);
    if (it == parent.end() || it->is_null()) return std::nullopt;
    if (!it->is_boolean()) {
      issues_.push_back(fmt::format("{}{}: expected true or false", prefix(where), key));
      return std::nullopt;
    }
    return it->get<bool>();
  }

  // Runs a parser that throws on bad text and records its message.
  template <typename F>
  void parse_into(std::string_view field, F f) {
    try {
      f();
    } catch (const Error& e) {
      issues_.push_back(fmt::format("{}: {}", field, e.what()));
    }
  }

  void add(std::string msg) { issues_.push_back(std::move(msg)); }

 private:
  static std::string prefix(std::string_view where) {
    return where.empty() ? std::string() : fmt::format("{}.", where);
  }
  std::vector<std::string>& issues_;
};

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  std::filesystem::path path(p);
  return path.is_absolute() ? path : base / path;
}

std::unique_ptr<ChatBackend> make_backend(const ProjectConfig& config) {
  if (config.backend.kind == BackendKind::Mock) {
    MockParams params = config.backend.mock_preset == "partisan" ? partisan_mock_params() : MockParams{};
    return std::make_unique<MockBackend>(std::move(params), *config.seeds.mock);
  }
  OpenAIBackendOptions opts;
  opts.base_url = config.backend.base_url;
  opts.api_key = api_key_from_env();
  opts.timeout = std::chrono::seconds(config.backend.timeout_seconds);
  return std::make_unique<OpenAICompatibleBackend>(std::move(opts));
}

std::string with_stage(std::string_view stage, const char* what) {
  return fmt::format("stage {}: {}", stage, what);
}

void write_text(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StorageError(fmt::format("cannot write '{}'", path.string()));
  out << body;
  out.flush();
  if (!out) throw StorageError(fmt::format("write to '{}' failed", path.string()));
}

}  // namespace

std::string_view to_string(BackendKind kind) { return kind == BackendKind::Mock ? "mock" : "live"; }

BackendKind parse_backend_kind(std::string_view text) {
  if (text == "mock") return BackendKind::Mock;
  if (text == "live") return BackendKind::Live;
  throw ConfigError(fmt::format("backend must be mock or live, got '{}'", text));
}

ConfigValidationError::ConfigValidationError(std::vector<std::string> violations)
    : ConfigError(join_lines(violations)), violations_(std::move(violations)) {}

ProjectConfig parse_project_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(fmt::format("project config is not valid JSON: {}", e.what()));
  }
  if (!root.is_object()) throw ConfigError("project config must be a JSON object");

  ProjectConfig c;
  c.base_dir = base_dir;
  std::vector<std::string> issues;
  Reader r(issues);
  r.check_keys(root, "", {"corpus", "filter", "models", "backend", "seeds", "chunk_size", "reliability",
                          "report", "output_dir", "resume", "finetune"});

  if (const auto* corpus = r.object(root, "corpus", "")) {
    r.check_keys(*corpus, "corpus", {"fox", "msnbc"});
    if (auto p = r.string(*corpus, "fox", "corpus")) c.fox_corpus = resolve(base_dir, *p);
    if (auto p = r.string(*corpus, "msnbc", "corpus")) c.msnbc_corpus = resolve(base_dir, *p);
  }

  if (const auto* filter = r.object(root, "filter", "")) {
    r.check_keys(*filter, "filter", {"date_from", "date_to", "required_terms", "word_count"});
    auto from = r.string(*filter, "date_from", "filter");
    auto to = r.string(*filter, "date_to", "filter");
    if (from.has_value() != to.has_value()) {
      r.add("filter: date_from and date_to must be given together");
    } else if (from) {
      r.parse_into("filter.date_from/date_to", [&] {
        c.filter.date_range = DateRange{parse_date(*from), parse_date(*to)};
      });
    }
    if (auto it = filter->find("required_terms"); it != filter->end() && !it->is_null()) {
      if (!it->is_array()) {
        r.add("filter.required_terms: expected an array of strings");
      } else {
        for (const auto& t : *it) {
          if (!t.is_string()) {
            r.add("filter.required_terms: expected an array of strings");
            break;
          }
          c.filter.required_terms.push_back(t.get<std::string>());
        }
      }
    }
    if (const auto* wc = r.object(*filter, "word_count", "filter")) {
      r.check_keys(*wc, "filter.word_count", {"low", "high"});
      auto lo = r.unsigned_int(*wc, "low", "filter.word_count");
      auto hi = r.unsigned_int(*wc, "high", "filter.word_count");
      if (lo && hi) {
        c.filter.wc_range = WordCountRange{*lo, *hi};
      } else {
        r.add("filter.word_count: low and high are required");
      }
    }
  }

  if (const auto* models = r.object(root, "models", "")) {
    r.check_keys(*models, "models", {"default", "finetuned"});
    if (auto m = r.string(*models, "default", "models")) c.default_model = *m;
    if (auto m = r.string(*models, "finetuned", "models")) c.finetuned_model = *m;
  }

  if (const auto* b = r.object(root, "backend", "")) {
    r.check_keys(*b, "backend", {"kind", "base_url", "mock_preset", "parallelism", "requests_per_second",
                                 "timeout_seconds", "max_attempts"});
    if (auto k = r.string(*b, "kind", "backend")) {
      r.parse_into("backend.kind", [&] { c.backend.kind = parse_backend_kind(*k); });
    }
    if (auto u = r.string(*b, "base_url", "backend")) c.backend.base_url = *u;
    if (auto p = r.string(*b, "mock_preset", "backend")) c.backend.mock_preset = *p;
    if (auto n = r.unsigned_int(*b, "parallelism", "backend")) c.backend.parallelism = *n;
    if (auto n = r.number(*b, "requests_per_second", "backend")) c.backend.requests_per_second = *n;
    if (auto n = r.unsigned_int(*b, "timeout_seconds", "backend")) c.backend.timeout_seconds = static_cast<int>(*n);
    if (auto n = r.unsigned_int(*b, "max_attempts", "backend")) c.backend.max_attempts = static_cast<int>(*n);
  }

  if (const auto* s = r.object(root, "seeds", "")) {
    r.check_keys(*s, "seeds", {"sample", "mock", "subset"});
    c.seeds.sample = r.unsigned_int(*s, "sample", "seeds");
    c.seeds.mock = r.unsigned_int(*s, "mock", "seeds");
    c.seeds.subset = r.unsigned_int(*s, "subset", "seeds");
  }

  if (auto n = r.unsigned_int(root, "chunk_size", "")) c.chunk_size = *n;

  if (auto it = root.find("reliability"); it != root.end() && !it->is_null()) {
    if (it->is_string() && it->get<std::string>() == "all") {
      c.reliability.reset();
    } else if (it->is_object()) {
      r.check_keys(*it, "reliability", {"n_total", "per_source"});
      ReliabilitySampling rs;
      if (auto n = r.unsigned_int(*it, "n_total", "reliability")) rs.n_total = *n;
      if (auto n = r.unsigned_int(*it, "per_source", "reliability")) rs.per_source = *n;
      c.reliability = rs;
    } else {
      r.add("reliability: expected \"all\" or {n_total, per_source}");
    }
  } else {
    c.reliability = ReliabilitySampling{};
  }

  if (const auto* rep = r.object(root, "report", "")) {
    r.check_keys(*rep, "report", {"level", "threshold", "confidence"});
    if (auto l = r.string(*rep, "level", "report")) {
      r.parse_into("report.level", [&] { c.level = parse_analysis_level(*l); });
    }
    if (auto it = rep->find("threshold"); it != rep->end() && !it->is_null()) {
      if (it->is_number()) {
        c.threshold = it->get<double>();
      } else if (it->is_string()) {
        r.parse_into("report.threshold", [&] { c.threshold = parse_threshold(it->get<std::string>()); });
      } else {
        r.add("report.threshold: expected a number or a named cutoff");
      }
    }
    if (auto n = r.number(*rep, "confidence", "report")) c.confidence = *n;
  }

  if (auto o = r.string(root, "output_dir", "")) c.output_dir = resolve(base_dir, *o);
  if (auto b = r.boolean(root, "resume", "")) c.resume = *b;

  if (const auto* ft = r.object(root, "finetune", "")) {
    r.check_keys(*ft, "finetune", {"input", "special"});
    FineTuneConfig f;
    if (auto p = r.string(*ft, "input", "finetune")) {
      f.input = resolve(base_dir, *p);
    } else {
      r.add("finetune.input: required when finetune is given");
    }
    if (auto s = r.string(*ft, "special", "finetune")) {
      r.parse_into("finetune.special", [&] { f.special = parse_special_codes(*s); });
    }
    c.finetune = f;
  }

  if (!issues.empty()) throw ConfigValidationError(std::move(issues));
  return c;
}

std::vector<std::string> ProjectConfig::violations() const {
  std::vector<std::string> v;
  auto need_file = [&](const std::filesystem::path& p, std::string_view field) {
    if (p.empty()) {
      v.push_back(fmt::format("{}: required", field));
    } else if (!std::filesystem::is_regular_file(p)) {
      v.push_back(fmt::format("{}: file not found: {}", field, p.string()));
    }
  };
  need_file(fox_corpus, "corpus.fox");
  need_file(msnbc_corpus, "corpus.msnbc");
  try {
    filter.validate();
  } catch (const Error& e) {
    v.push_back(fmt::format("filter: {}", e.what()));
  }
  if (default_model.empty()) v.emplace_back("models.default: required");
  if (finetuned_model.empty()) v.emplace_back("models.finetuned: required");
  if (backend.kind == BackendKind::Mock && backend.mock_preset != "partisan" &&
      backend.mock_preset != "neutral") {
    v.push_back(fmt::format("backend.mock_preset: must be partisan or neutral, got '{}'", backend.mock_preset));
  }
  if (backend.kind == BackendKind::Live && !backend.base_url.starts_with("http://") &&
      !backend.base_url.starts_with("https://")) {
    v.push_back(fmt::format("backend.base_url: expected an http(s) URL, got '{}'", backend.base_url));
  }
  if (backend.parallelism == 0) v.emplace_back("backend.parallelism: must be at least 1");
  if (backend.requests_per_second < 0) v.emplace_back("backend.requests_per_second: must be >= 0");
  if (backend.max_attempts < 1) v.emplace_back("backend.max_attempts: must be at least 1");
  if (backend.timeout_seconds < 1) v.emplace_back("backend.timeout_seconds: must be at least 1");
  if (!seeds.sample) v.emplace_back("seeds.sample: required to equalize the corpora");
  if (backend.kind == BackendKind::Mock && !seeds.mock) {
    v.emplace_back("seeds.mock: required when backend.kind is mock");
  }
  if (reliability) {
    if (!seeds.subset) v.emplace_back("seeds.subset: required when reliability sampling is enabled");
    if (reliability->per_source == 0 || reliability->n_total != 2 * reliability->per_source) {
      v.push_back(fmt::format("reliability: n_total ({}) must be twice per_source ({})",
                              reliability->n_total, reliability->per_source));
    }
  }
  if (chunk_size < 2) v.emplace_back("chunk_size: must be at least 2");
  if (!(threshold >= -1.0 && threshold <= 1.0)) v.emplace_back("report.threshold: must lie in [-1, 1]");
  if (!(confidence > 0.0 && confidence < 1.0)) v.emplace_back("report.confidence: must lie in (0, 1)");
  if (output_dir.empty()) v.emplace_back("output_dir: required");
  if (finetune) need_file(finetune->input, "finetune.input");
  return v;
}

void require_valid(const ProjectConfig& config) {
  auto v = config.violations();
  if (!v.empty()) throw ConfigValidationError(std::move(v));
}

ProjectConfig load_project_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot read project config '{}'", path.string()));
  std::stringstream ss;
  ss << in.rdbuf();
  auto base = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  auto config = parse_project_config(ss.str(), base);
  require_valid(config);
  return config;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e)) return kExitConfig;
  if (dynamic_cast<const BackendError*>(&e)) return kExitBackend;
  if (dynamic_cast<const StorageError*>(&e)) return kExitStorage;
  if (dynamic_cast<const std::filesystem::filesystem_error*>(&e)) return kExitStorage;
  return kExitFailure;
}

RunAllResult run_all(const ProjectConfig& config, const RunAllOptions& options) {
  require_valid(config);

  auto log = options.log ? options.log : [](std::string_view line) { std::cerr << line << '\n'; };
  RunAllResult result;

  auto stage = [&](std::string_view name, auto&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    try {
      body();
    } catch (const AuthError& e) {
      throw AuthError(with_stage(name, e.what()));
    } catch (const BackendError& e) {
      throw BackendError(with_stage(name, e.what()));
    } catch (const ConfigError& e) {
      throw ConfigError(with_stage(name, e.what()));
    } catch (const StorageError& e) {
      throw StorageError(with_stage(name, e.what()));
    } catch (const std::filesystem::filesystem_error& e) {
      throw StorageError(with_stage(name, e.what()));
    } catch (const StatsError& e) {
      throw StatsError(with_stage(name, e.what()));
    } catch (const InputError& e) {
      throw InputError(with_stage(name, e.what()));
    } catch (const Error& e) {
      throw Error(with_stage(name, e.what()));
    }
    const std::chrono::duration<double, std::milli> dt = std::chrono::steady_clock::now() - t0;
    result.timings.push_back({std::string(name), dt.count()});
    log(fmt::format("[laca] {:<10} {:>10.1f} ms", name, dt.count()));
  };

  std::optional<Corpus> fox, msnbc;
  std::vector<Transcript> fox_kept, msnbc_kept;
  std::vector<Transcript> sample;

  stage("ingest", [&] {
    fox.emplace(ingest(config.fox_corpus, Source::FoxNews));
    msnbc.emplace(ingest(config.msnbc_corpus, Source::MSNBC));
    log(fmt::format("[laca] ingested {} Fox News and {} MSNBC transcripts", fox->size(), msnbc->size()));
  });
  stage("filter", [&] {
    fox_kept = filter(fox->transcripts(), config.filter);
    msnbc_kept = filter(msnbc->transcripts(), config.filter);
    log(fmt::format("[laca] {} Fox News and {} MSNBC transcripts pass the filter", fox_kept.size(),
                    msnbc_kept.size()));
  });
  stage("sample", [&] {
    auto [a, b] = equalize(fox_kept, msnbc_kept, *config.seeds.sample);
    sample = std::move(a);
    sample.insert(sample.end(), std::make_move_iterator(b.begin()), std::make_move_iterator(b.end()));
  });

  result.output_dir = config.output_dir;
  result.score_log = config.output_dir / "scores.csv";

  stage("code", [&] {
    std::filesystem::create_directories(config.output_dir);
    auto backend = make_backend(config);
    const auto coders = builtin_configs(config.default_model, config.finetuned_model);
    RunOptions ro;
    ro.log_path = result.score_log;
    ro.resume = config.resume;
    ro.chunk_size = config.chunk_size;
    ro.parallelism = config.backend.parallelism;
    ro.requests_per_second = config.backend.requests_per_second;
    ro.retry.max_attempts = config.backend.max_attempts;
    ro.seed = config.backend.kind == BackendKind::Mock ? config.seeds.mock : std::nullopt;
    result.coding = run(sample, coders, kAllCandidates, *backend, ro);
    log(fmt::format("[laca] {} rows ({} new, {} resumed, {} MISSING)", result.coding.scores.rows.size(),
                    result.coding.written, result.coding.skipped, result.coding.missing));
  });
  result.artifacts.push_back(result.score_log);

  const auto& scores = result.coding.scores;
  stage("aggregate", [&] {
    const auto path = config.output_dir / "transcript_scores.csv";
    write_text(path, transcript_scores_csv(aggregate(scores.rows), scores.metadata.transcript_sources));
    result.artifacts.push_back(path);
  });
  stage("subset", [&] {
    if (!config.reliability) return;
    const auto subset = reliability_subset(scores, config.reliability->n_total,
                                           config.reliability->per_source, *config.seeds.subset);
    const auto path = config.output_dir / "reliability_subset.csv";
    write_score_rows(path, subset.rows);
    result.artifacts.push_back(path);
  });
  stage("stats", [&] {
    ReportOptions ro;
    ro.level = config.level;
    ro.threshold = config.threshold;
    ro.confidence = config.confidence;
    if (config.reliability) {
      ro.sampling = ReliabilitySampling{config.reliability->n_total, config.reliability->per_source,
                                        *config.seeds.subset};
    }
    result.report = build_report(scores, ro);
  });
  stage("report", [&] {
    for (auto& p : emit(result.report, config.output_dir / "report")) result.artifacts.push_back(std::move(p));
  });
  if (config.finetune) {
    stage("finetune", [&] {
      const auto records = read_survey_csv(config.finetune->input);
      const auto path = config.output_dir / "train.jsonl";
      const auto s = write_training_file(records, path, config.finetune->special);
      log(fmt::format("[laca] {} training lines, about {} tokens", s.lines, s.estimated_tokens));
      result.artifacts.push_back(path);
    });
  }
  return result;
}

}  // namespace laca
