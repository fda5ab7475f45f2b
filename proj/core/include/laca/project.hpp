#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "laca/corpus.hpp"
#include "laca/error.hpp"
#include "laca/finetune.hpp"
#include "laca/report.hpp"

namespace laca {

enum class BackendKind { Mock, Live };

std::string_view to_string(BackendKind kind);
BackendKind parse_backend_kind(std::string_view text);

struct BackendConfig {
  BackendKind kind = BackendKind::Mock;
  std::string base_url = "https://api.openai.com";
  std::string mock_preset = "partisan";  // "partisan" | "neutral"
  std::size_t parallelism = 4;
  double requests_per_second = 0.0;
  int timeout_seconds = 60;
  int max_attempts = 3;
};

struct Seeds {
  std::optional<std::uint64_t> sample;  // corpus equalization
  std::optional<std::uint64_t> mock;    // mock backend
  std::optional<std::uint64_t> subset;  // reliability subsample
};

struct FineTuneConfig {
  std::filesystem::path input;
  SpecialCodes special = SpecialCodes::Keep;
};

// One JSON file drives a full run; relative paths resolve against the
// directory holding the file.
struct ProjectConfig {
  std::filesystem::path base_dir;
  std::filesystem::path fox_corpus;
  std::filesystem::path msnbc_corpus;
  FilterCriteria filter;
  std::string default_model = "gpt-4o-2024-08-06";
  std::string finetuned_model;
  BackendConfig backend;
  Seeds seeds;
  std::size_t chunk_size = kDefaultChunkTokens;
  std::optional<ReliabilitySampling> reliability;  // nullopt: every chunk response
  AnalysisLevel level = AnalysisLevel::Transcript;
  double threshold = kDefaultAcceptability;
  double confidence = 0.95;
  std::filesystem::path output_dir;
  bool resume = false;
  std::optional<FineTuneConfig> finetune;

  // Every violation, in a stable order; empty when the config is usable.
  std::vector<std::string> violations() const;
};

// Carries every violation rather than the first.
class ConfigValidationError : public ConfigError {
 public:
  explicit ConfigValidationError(std::vector<std::string> violations);
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Parses without checking paths or cross-field rules. Throws ConfigError
// on unreadable or syntactically invalid files and ConfigValidationError on
// schema violations.
ProjectConfig parse_project_config(std::string_view json_text,
                                   const std::filesystem::path& base_dir);

// Parses and validates. Throws ConfigValidationError listing all problems.
ProjectConfig load_project_config(const std::filesystem::path& path);

// Throws ConfigValidationError when violations() is non-empty.
void require_valid(const ProjectConfig& config);

struct StageTiming {
  std::string stage;
  double milliseconds = 0.0;
};

struct RunAllResult {
  std::filesystem::path output_dir;
  std::filesystem::path score_log;
  std::vector<std::filesystem::path> artifacts;
  std::vector<StageTiming> timings;
  RunSummary coding;
  Report report;
};

struct RunAllOptions {
  // Receives one line per stage; defaults to stderr.
  std::function<void(std::string_view)> log;
};

// Validates, then ingest, filter, equalize, code, aggregate, reliability
// subset, statistics, report, and fine-tune prep when configured. Nothing
// is written before validation passes. Stage errors are rethrown with the
// stage name prefixed and their type preserved.
RunAllResult run_all(const ProjectConfig& config, const RunAllOptions& options = {});

// 0 success, 2 config, 3 backend, 4 storage, 1 anything else.
int exit_code_for(const std::exception& e);

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitBackend = 3;
inline constexpr int kExitStorage = 4;

}  // namespace laca
