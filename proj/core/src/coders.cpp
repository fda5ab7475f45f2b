#include "laca/coders.hpp"

#include <cctype>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "laca/error.hpp"
#include "laca/random.hpp"

namespace laca {
namespace {

constexpr std::string_view kSystemBase =
    "You are an assistant that codes the sentiment of television news transcripts.";
constexpr std::string_view kPersonaLead = " Answer as ";
constexpr std::string_view kUserLead = "Rate the sentiment toward ";
constexpr std::string_view kUserScale =
    " in the transcript excerpt below on a five-point scale: -2 for very negative, -1 for "
    "negative, 0 for neutral, 1 for positive, 2 for very positive. Respond with the number "
    "only.\n\nTranscript:\n";

std::string_view persona_text_for(Persona p) {
  switch (p) {
    case Persona::Democrat: return kDemocratPersonaText;
    case Persona::Republican: return kRepublicanPersonaText;
    case Persona::None: break;
  }
  return {};
}

bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

}  // namespace

void CoderConfig::validate() const {
  if (base_model.empty()) {
    throw ConfigError(fmt::format("coder {}: empty base model name", to_string(id)));
  }
  if ((persona == Persona::None) != persona_text.empty()) {
    throw ConfigError(fmt::format("coder {}: persona {} does not match persona text",
                                  to_string(id), to_string(persona)));
  }
  if (persona != persona_of(id)) {
    throw ConfigError(fmt::format("coder {}: persona {} contradicts the coder id", to_string(id),
                                  to_string(persona)));
  }
  if (!(decoding.temperature >= 0.0) || decoding.max_response_tokens <= 0) {
    throw ConfigError(fmt::format("coder {}: invalid decoding parameters", to_string(id)));
  }
}

std::vector<CoderConfig> builtin_configs(std::string_view default_model,
                                         std::string_view finetuned_model) {
  if (default_model.empty() || finetuned_model.empty()) {
    throw ConfigError("both the default and the fine-tuned model names are required");
  }
  std::vector<CoderConfig> out;
  for (auto id : kAllCoders) {
    CoderConfig c;
    c.id = id;
    c.base_model = std::string(is_finetuned(id) ? finetuned_model : default_model);
    c.persona = persona_of(id);
    c.persona_text = std::string(persona_text_for(c.persona));
    out.push_back(std::move(c));
  }
  return out;
}

const CoderConfig& find_config(std::span<const CoderConfig> configs, CoderId id) {
  for (const auto& c : configs) {
    if (c.id == id) return c;
  }
  throw ConfigError(fmt::format("no configuration for coder {}", to_string(id)));
}

PromptRequest render_prompt(const CoderConfig& config, const Chunk& chunk, Candidate candidate) {
  if (chunk.text.empty()) {
    throw InputError(fmt::format("chunk {} of '{}' has empty text", chunk.index,
                                 chunk.transcript_id));
  }
  PromptRequest req;
  req.candidate = candidate;
  req.decoding = config.decoding;
  req.system_text = std::string(kSystemBase);
  if (config.persona != Persona::None) {
    req.system_text += kPersonaLead;
    req.system_text += config.persona_text;
    req.system_text += '.';
  }
  req.user_text.reserve(kUserLead.size() + kUserScale.size() + chunk.text.size() + 16);
  req.user_text += kUserLead;
  req.user_text += full_name(candidate);
  req.user_text += kUserScale;
  req.user_text += chunk.text;
  return req;
}

std::string prompt_template_hash() {
  std::uint64_t h = fnv1a64(kPromptTemplateVersion);
  for (auto part : {kSystemBase, kPersonaLead, kUserLead, kUserScale, kDemocratPersonaText,
                    kRepublicanPersonaText}) {
    h = fnv1a64(part, h);
    h = fnv1a64(std::string_view("\x1f", 1), h);
  }
  return hex64(h);
}

ScoreValue parse_score(std::string_view raw) {
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (!is_digit(raw[i])) continue;
    // Digits glued to a word ("COVID19", "v2") are not a numeric token.
    std::size_t start = i;
    bool negative = false;
    if (start > 0 && (raw[start - 1] == '-' || raw[start - 1] == '+')) {
      const bool sign_free = start < 2 || !is_alnum(raw[start - 2]);
      if (sign_free) {
        negative = raw[start - 1] == '-';
        --start;
      }
    }
    if (start == i && i > 0 && is_alnum(raw[i - 1])) {
      while (i < raw.size() && is_digit(raw[i])) ++i;
      continue;
    }
    std::size_t end = i;
    while (end < raw.size() && is_digit(raw[end])) ++end;
    // A decimal like "1.0" is accepted only when it is integral.
    if (end + 1 < raw.size() && raw[end] == '.' && is_digit(raw[end + 1])) {
      std::size_t frac = end + 1;
      bool integral = true;
      while (frac < raw.size() && is_digit(raw[frac])) {
        if (raw[frac] != '0') integral = false;
        ++frac;
      }
      if (!integral) return std::nullopt;
    }
    if (end - i > 3) return std::nullopt;
    int magnitude = 0;
    std::from_chars(raw.data() + i, raw.data() + end, magnitude);
    const int value = negative ? -magnitude : magnitude;
    if (value < kScoreMin || value > kScoreMax) return std::nullopt;
    return value;
  }
  return std::nullopt;
}

}  // namespace laca
