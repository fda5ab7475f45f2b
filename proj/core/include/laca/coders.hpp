#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "laca/corpus.hpp"
#include "laca/types.hpp"

namespace laca {

// Bumped whenever the instruction wording below changes; its hash is stored
// with every score log so runs with different prompts are never mixed.
inline constexpr std::string_view kPromptTemplateVersion = "laca-sentiment/1";

inline constexpr std::string_view kDemocratPersonaText =
    "a U.S. citizen who is a woman in her 20s, Black, with a college degree, Democrat, and "
    "middle income";
inline constexpr std::string_view kRepublicanPersonaText =
    "a U.S. citizen who is a man in his 50s, white, with a high school degree, Republican, and "
    "upper-middle income";

struct DecodingParams {
  double temperature = 0.0;
  int max_response_tokens = 10;
};

struct CoderConfig {
  CoderId id = CoderId::DZ;
  std::string base_model;
  Persona persona = Persona::None;
  std::string persona_text;  // empty iff persona == None
  DecodingParams decoding;

  // Throws ConfigError if the persona/persona_text pairing, the base model,
  // or the decoding parameters are inconsistent.
  void validate() const;
};

// DZ, DD, DR use `default_model`; FZ, FD, FR use `finetuned_model`.
std::vector<CoderConfig> builtin_configs(std::string_view default_model,
                                         std::string_view finetuned_model);

const CoderConfig& find_config(std::span<const CoderConfig> configs, CoderId id);

struct PromptRequest {
  std::string system_text;
  std::string user_text;
  Candidate candidate = Candidate::Biden;
  DecodingParams decoding;
};

PromptRequest render_prompt(const CoderConfig& config, const Chunk& chunk, Candidate candidate);

// Stable hash over every template string render_prompt uses.
std::string prompt_template_hash();

// A coded sentiment in {-2..2}; nullopt is MISSING.
using ScoreValue = std::optional<int>;

inline constexpr int kScoreMin = -2;
inline constexpr int kScoreMax = 2;

// Takes the first integer token of a reply. Anything that is not an
// in-range integer yields MISSING; never throws.
ScoreValue parse_score(std::string_view raw);

struct SentimentScore {
  CoderId coder = CoderId::DZ;
  std::string transcript_id;
  std::size_t chunk_index = 0;
  Candidate candidate = Candidate::Biden;
  ScoreValue value;
  std::string raw_response;

  friend bool operator==(const SentimentScore&, const SentimentScore&) = default;
};

}  // namespace laca
