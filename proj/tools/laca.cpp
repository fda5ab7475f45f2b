#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "laca/coders.hpp"
#include "laca/corpus.hpp"
#include "laca/finetune.hpp"
#include "laca/mock_backend.hpp"
#include "laca/openai_backend.hpp"
#include "laca/pipeline.hpp"
#include "laca/project.hpp"
#include "laca/report.hpp"

namespace fs = std::filesystem;
using namespace laca;

namespace {

struct FilterFlags {
  std::string from;
  std::string to;
  std::vector<std::string> terms;
  std::optional<std::size_t> min_words;
  std::optional<std::size_t> max_words;

  void attach(CLI::App* cmd) {
    cmd->add_option("--from", from, "First air date, YYYY-MM-DD");
    cmd->add_option("--to", to, "Last air date, YYYY-MM-DD (inclusive)");
    cmd->add_option("--terms", terms, "Terms every transcript must contain");
    cmd->add_option("--wc-min", min_words, "Minimum word count");
    cmd->add_option("--wc-max", max_words, "Maximum word count");
  }

  FilterCriteria criteria() const {
    FilterCriteria c;
    if (from.empty() != to.empty()) throw InputError("--from and --to must be given together");
    if (!from.empty()) c.date_range = DateRange{parse_date(from), parse_date(to)};
    c.required_terms = terms;
    if (min_words.has_value() != max_words.has_value()) {
      throw InputError("--wc-min and --wc-max must be given together");
    }
    if (min_words) c.wc_range = WordCountRange{*min_words, *max_words};
    c.validate();
    return c;
  }
};

struct ReliabilityFlags {
  std::size_t n_total = kDefaultSubsetTotal;
  std::size_t per_source = kDefaultSubsetPerSource;
  std::optional<std::uint64_t> seed;
  bool all_units = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--subset-total", n_total, "Chunk responses in the reliability subset")
        ->capture_default_str();
    cmd->add_option("--subset-per-source", per_source, "Chunk responses per outlet")
        ->capture_default_str();
    cmd->add_option("--subset-seed", seed, "Seed for the reliability subset");
    cmd->add_flag("--all-units", all_units, "Compute reliability over every chunk response");
  }

  std::optional<ReliabilitySampling> sampling() const {
    if (all_units) return std::nullopt;
    if (!seed) throw ConfigError("--subset-seed is required unless --all-units is given");
    return ReliabilitySampling{n_total, per_source, *seed};
  }
};

struct ReportFlags {
  std::string threshold = "default";
  std::string level = "transcript";
  double confidence = 0.95;

  void attach(CLI::App* cmd) {
    cmd->add_option("--threshold", threshold, "Acceptability cutoff: default, tentative, reliable or a number")
        ->capture_default_str();
    cmd->add_option("--level", level, "Descriptive statistics level: transcript or chunk")
        ->capture_default_str();
    cmd->add_option("--confidence", confidence, "Tukey interval confidence")->capture_default_str();
  }
};

ReportOptions report_options(const ReportFlags& r, const ReliabilityFlags& rel) {
  ReportOptions o;
  o.level = parse_analysis_level(r.level);
  o.threshold = parse_threshold(r.threshold);
  o.confidence = r.confidence;
  o.sampling = rel.sampling();
  return o;
}

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StorageError(fmt::format("cannot write '{}'", path.string()));
  out << body;
  if (!out) throw StorageError(fmt::format("write to '{}' failed", path.string()));
}

void cmd_ingest(CLI::App& app) {
  auto* cmd = app.add_subcommand("ingest", "Load and filter one outlet's transcripts");
  auto input = std::make_shared<std::string>();
  auto source = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto filters = std::make_shared<FilterFlags>();
  cmd->add_option("--input", *input, "Transcript JSONL")->required();
  cmd->add_option("--source", *source, "fox or msnbc")->required();
  cmd->add_option("--out", *out, "Write the transcripts that pass the filter here");
  filters->attach(cmd);
  cmd->callback([=] {
    const auto corpus = ingest(*input, parse_source(*source));
    const auto stats = corpus.stats();
    const auto kept = filter(corpus.transcripts(), filters->criteria());
    fmt::print("{}: {} transcripts, mean {:.0f} words; {} pass the filter\n", to_string(corpus.source()),
               stats.count, stats.mean_word_count, kept.size());
    if (!out->empty()) write_transcripts(*out, kept);
  });
}

void cmd_sample(CLI::App& app) {
  auto* cmd = app.add_subcommand("sample", "Filter both outlets and optionally equalize their sizes");
  auto fox = std::make_shared<std::string>();
  auto msnbc = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto seed = std::make_shared<std::optional<std::uint64_t>>();
  auto equal = std::make_shared<bool>(false);
  auto filters = std::make_shared<FilterFlags>();
  cmd->add_option("--fox", *fox, "Fox News transcript JSONL")->required();
  cmd->add_option("--msnbc", *msnbc, "MSNBC transcript JSONL")->required();
  cmd->add_flag("--equalize", *equal, "Subsample the larger outlet to the size of the smaller");
  cmd->add_option("--seed", *seed, "Sampling seed (required with --equalize)");
  cmd->add_option("--out", *out, "Directory receiving fox.jsonl and msnbc.jsonl")->required();
  filters->attach(cmd);
  cmd->callback([=] {
    const auto criteria = filters->criteria();
    auto f = filter(ingest(*fox, Source::FoxNews).transcripts(), criteria);
    auto m = filter(ingest(*msnbc, Source::MSNBC).transcripts(), criteria);
    fmt::print("{} Fox News and {} MSNBC transcripts pass the filter\n", f.size(), m.size());
    if (*equal) {
      if (!*seed) throw ConfigError("--seed is required with --equalize");
      std::tie(f, m) = equalize(f, m, **seed);
      fmt::print("equalized to {} per outlet\n", f.size());
    }
    fs::create_directories(*out);
    write_transcripts(fs::path(*out) / "fox.jsonl", f);
    write_transcripts(fs::path(*out) / "msnbc.jsonl", m);
  });
}

void cmd_code(CLI::App& app) {
  struct Args {
    std::string fox, msnbc, out, backend = "mock", preset = "partisan";
    std::string base_url = "https://api.openai.com";
    std::string default_model = "gpt-4o-2024-08-06", finetuned_model;
    std::optional<std::uint64_t> seed;
    std::size_t parallelism = 4;
    double rps = 0.0;
    std::size_t chunk_size = kDefaultChunkTokens;
    bool resume = false;
    std::optional<std::size_t> max_rows;
  };
  auto a = std::make_shared<Args>();
  auto* cmd = app.add_subcommand("code", "Code every chunk with the six coders");
  cmd->add_option("--fox", a->fox, "Fox News sample JSONL")->required();
  cmd->add_option("--msnbc", a->msnbc, "MSNBC sample JSONL")->required();
  cmd->add_option("--out", a->out, "Score log CSV")->required();
  cmd->add_option("--backend", a->backend, "mock or live")->capture_default_str();
  cmd->add_option("--mock-preset", a->preset, "partisan or neutral")->capture_default_str();
  cmd->add_option("--base-url", a->base_url, "Chat-completions base URL")->capture_default_str();
  cmd->add_option("--default-model", a->default_model)->capture_default_str();
  cmd->add_option("--finetuned-model", a->finetuned_model)->required();
  cmd->add_option("--seed", a->seed, "Mock backend seed");
  cmd->add_option("--parallelism", a->parallelism)->capture_default_str();
  cmd->add_option("--rps", a->rps, "Request rate limit, 0 for none")->capture_default_str();
  cmd->add_option("--chunk-size", a->chunk_size, "Approximate tokens per chunk")->capture_default_str();
  cmd->add_flag("--resume", a->resume, "Skip items already in the score log");
  cmd->add_option("--max-rows", a->max_rows, "Stop after this many new rows");
  cmd->callback([=] {
    auto sample = ingest(a->fox, Source::FoxNews).transcripts();
    const auto m = ingest(a->msnbc, Source::MSNBC).transcripts();
    sample.insert(sample.end(), m.begin(), m.end());

    std::unique_ptr<ChatBackend> backend;
    const auto kind = parse_backend_kind(a->backend);
    if (kind == BackendKind::Mock) {
      if (!a->seed) throw ConfigError("--seed is required with the mock backend");
      if (a->preset != "partisan" && a->preset != "neutral") {
        throw ConfigError(fmt::format("unknown mock preset '{}'", a->preset));
      }
      backend = std::make_unique<MockBackend>(a->preset == "partisan" ? partisan_mock_params() : MockParams{},
                                              *a->seed);
    } else {
      OpenAIBackendOptions o;
      o.base_url = a->base_url;
      o.api_key = api_key_from_env();
      backend = std::make_unique<OpenAICompatibleBackend>(std::move(o));
    }
    const auto coders = builtin_configs(a->default_model, a->finetuned_model);
    RunOptions ro;
    ro.log_path = a->out;
    ro.resume = a->resume;
    ro.chunk_size = a->chunk_size;
    ro.parallelism = a->parallelism;
    ro.requests_per_second = a->rps;
    ro.seed = a->seed;
    ro.max_new_rows = a->max_rows;
    const auto s = run(sample, coders, kAllCandidates, *backend, ro);
    fmt::print("{} of {} items coded ({} new, {} resumed, {} MISSING){}\n", s.scores.rows.size(), s.planned,
               s.written, s.skipped, s.missing, s.complete() ? "" : "; incomplete, rerun with --resume");
  });
}

void cmd_aggregate(CLI::App& app) {
  auto* cmd = app.add_subcommand("aggregate", "Average chunk scores per transcript");
  auto scores = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  cmd->add_option("--scores", *scores, "Score log CSV")->required();
  cmd->add_option("--out", *out, "Transcript score CSV")->required();
  cmd->callback([=] {
    const auto set = load_score_set(*scores);
    const auto agg = aggregate(set.rows);
    write_file(*out, transcript_scores_csv(agg, set.metadata.transcript_sources));
    fmt::print("{} transcript scores\n", agg.size());
  });
}

void cmd_subset(CLI::App& app) {
  auto* cmd = app.add_subcommand("subset", "Draw the stratified reliability subset");
  auto scores = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto n = std::make_shared<std::size_t>(kDefaultSubsetTotal);
  auto per = std::make_shared<std::size_t>(kDefaultSubsetPerSource);
  auto seed = std::make_shared<std::uint64_t>(0);
  cmd->add_option("--scores", *scores, "Score log CSV")->required();
  cmd->add_option("--out", *out, "Subset rows, score log format")->required();
  cmd->add_option("--n", *n, "Chunk responses in total")->capture_default_str();
  cmd->add_option("--per-source", *per, "Chunk responses per outlet")->capture_default_str();
  cmd->add_option("--seed", *seed, "Sampling seed")->required();
  cmd->callback([=] {
    const auto set = load_score_set(*scores);
    const auto sub = reliability_subset(set, *n, *per, *seed);
    write_score_rows(*out, sub.rows);
    fmt::print("{} chunk responses, {} rows\n", sub.units.size(), sub.rows.size());
  });
}

void cmd_stats(CLI::App& app) {
  auto* cmd = app.add_subcommand("stats", "Print reliability, ANOVA and congruence results");
  auto scores = std::make_shared<std::string>();
  auto rep = std::make_shared<ReportFlags>();
  auto rel = std::make_shared<ReliabilityFlags>();
  cmd->add_option("--scores", *scores, "Score log CSV")->required();
  rep->attach(cmd);
  rel->attach(cmd);
  cmd->callback([=] {
    const auto report = build_report(load_score_set(*scores), report_options(*rep, *rel));
    fmt::print("{}", render_text(report));
  });
}

void cmd_report(CLI::App& app) {
  auto* cmd = app.add_subcommand("report", "Write report.json, tables and figures");
  auto scores = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto rep = std::make_shared<ReportFlags>();
  auto rel = std::make_shared<ReliabilityFlags>();
  cmd->add_option("--scores", *scores, "Score log CSV")->required();
  cmd->add_option("--out", *out, "Output directory")->required();
  rep->attach(cmd);
  rel->attach(cmd);
  cmd->callback([=] {
    const auto report = build_report(load_score_set(*scores), report_options(*rep, *rel));
    for (const auto& p : emit(report, *out)) fmt::print("{}\n", p.string());
  });
}

void cmd_finetune(CLI::App& app) {
  auto* cmd = app.add_subcommand("finetune-prep", "Render survey records as chat fine-tuning JSONL");
  auto input = std::make_shared<std::string>();
  auto out = std::make_shared<std::string>();
  auto special = std::make_shared<std::string>("keep");
  cmd->add_option("--input", *input, "Survey CSV")->required();
  cmd->add_option("--out", *out, "Training JSONL")->required();
  cmd->add_option("--special", *special, "keep or drop nonsubstantive codes")->capture_default_str();
  cmd->callback([=] {
    const auto mode = parse_special_codes(*special);
    const auto s = write_training_file(read_survey_csv(*input), *out, mode);
    fmt::print("{} training lines, about {} tokens (word heuristic, not a tokenizer count)\n", s.lines,
               s.estimated_tokens);
  });
}

struct ConfigFlags {
  std::string config;
  std::string output_dir;
  std::string backend;
  std::string base_url;
  std::optional<std::uint64_t> seed_sample, seed_mock, seed_subset;
  std::optional<std::size_t> parallelism;
  std::string threshold;
  std::string level;
  bool resume = false;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", config, "Project config JSON")->required();
    cmd->add_option("--output-dir", output_dir, "Override output_dir");
    cmd->add_option("--backend", backend, "Override backend.kind");
    cmd->add_option("--base-url", base_url, "Override backend.base_url");
    cmd->add_option("--seed-sample", seed_sample, "Override seeds.sample");
    cmd->add_option("--seed-mock", seed_mock, "Override seeds.mock");
    cmd->add_option("--seed-subset", seed_subset, "Override seeds.subset");
    cmd->add_option("--parallelism", parallelism, "Override backend.parallelism");
    cmd->add_option("--threshold", threshold, "Override report.threshold");
    cmd->add_option("--level", level, "Override report.level");
    cmd->add_flag("--resume", resume, "Resume an interrupted score log");
  }

  ProjectConfig load() const {
    std::ifstream in(config, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("cannot read project config '{}'", config));
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const fs::path path(config);
    auto c = parse_project_config(text, path.has_parent_path() ? path.parent_path() : fs::path("."));
    if (!output_dir.empty()) c.output_dir = output_dir;
    if (!backend.empty()) c.backend.kind = parse_backend_kind(backend);
    if (!base_url.empty()) c.backend.base_url = base_url;
    if (seed_sample) c.seeds.sample = seed_sample;
    if (seed_mock) c.seeds.mock = seed_mock;
    if (seed_subset) c.seeds.subset = seed_subset;
    if (parallelism) c.backend.parallelism = *parallelism;
    if (!threshold.empty()) c.threshold = parse_threshold(threshold);
    if (!level.empty()) c.level = parse_analysis_level(level);
    if (resume) c.resume = true;
    require_valid(c);
    return c;
  }
};

void cmd_run_all(CLI::App& app) {
  auto* cmd = app.add_subcommand("run-all", "Run every stage from one project config");
  auto flags = std::make_shared<ConfigFlags>();
  flags->attach(cmd);
  cmd->callback([=] {
    const auto result = run_all(flags->load());
    for (const auto& p : result.artifacts) fmt::print("{}\n", p.string());
  });
}

void cmd_validate(CLI::App& app) {
  auto* cmd = app.add_subcommand("validate", "Check a project config and list every problem");
  auto flags = std::make_shared<ConfigFlags>();
  flags->attach(cmd);
  cmd->callback([=] {
    const auto c = flags->load();
    fmt::print("ok: backend {}, output {}\n", to_string(c.backend.kind), c.output_dir.string());
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dialectic intersubjectivity analysis of LLM-coded news transcripts"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "laca 0.3.0");
  cmd_ingest(app);
  cmd_sample(app);
  cmd_code(app);
  cmd_aggregate(app);
  cmd_subset(app);
  cmd_stats(app);
  cmd_report(app);
  cmd_finetune(app);
  cmd_run_all(app);
  cmd_validate(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Help and --version exit 0; every usage error is a config error.
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  } catch (const ConfigValidationError& e) {
    std::cerr << "error: invalid project config\n";
    for (const auto& v : e.violations()) std::cerr << "  - " << v << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitOk;
}
