#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace laca {

inline constexpr std::string_view kFineTuneTemplateVersion = "laca-anes-qa/1";

// The ten survey variables, in rendering order. to_string gives the CSV
// column name.
enum class SurveyField {
  Gender,
  Age,
  RaceEthnicity,
  Education,
  Income,
  IdeologySelf,
  IdeologyDemParty,
  IdeologyRepParty,
  TrustFox,
  TrustMsnbc,
};

inline constexpr std::array<SurveyField, 10> kSurveyFields = {
    SurveyField::Gender,           SurveyField::Age,          SurveyField::RaceEthnicity,
    SurveyField::Education,        SurveyField::Income,       SurveyField::IdeologySelf,
    SurveyField::IdeologyDemParty, SurveyField::IdeologyRepParty, SurveyField::TrustFox,
    SurveyField::TrustMsnbc};

std::string_view to_string(SurveyField field);
SurveyField parse_survey_field(std::string_view column);

// Question wording shown to the model for the field.
std::string_view question_text(SurveyField field);

inline constexpr int kMaxAge = 130;

// True for the nonsubstantive codes (-7, -6, -1, 77, 98, 99) of the fields
// that carry them.
bool is_special_code(SurveyField field, int code);

// Codebook label for `code`; age renders as the number itself. Throws
// InputError when the code is outside the field's domain.
std::string decode(SurveyField field, int code);

struct SurveyRecord {
  std::string id;
  std::array<int, 10> codes{};  // indexed in kSurveyFields order

  int code(SurveyField field) const { return codes[static_cast<std::size_t>(field)]; }
  int& code(SurveyField field) { return codes[static_cast<std::size_t>(field)]; }

  // Throws InputError naming the record and field of the first bad code.
  void validate() const;
};

enum class SpecialCodes { Keep, Drop };

std::string_view to_string(SpecialCodes mode);
SpecialCodes parse_special_codes(std::string_view text);

struct TrainingMessage {
  std::string role;
  std::string content;

  friend bool operator==(const TrainingMessage&, const TrainingMessage&) = default;
};

struct TrainingExample {
  std::vector<TrainingMessage> messages;
};

// One user/assistant turn per variable. With SpecialCodes::Drop, variables
// holding a nonsubstantive code are omitted.
TrainingExample render(const SurveyRecord& record, SpecialCodes special = SpecialCodes::Keep);

// {"messages":[{"role":..,"content":..},...]} on one line, no trailing newline.
std::string to_jsonl(const TrainingExample& example);

// CSV with an `id` column plus one column per variable, in any order.
std::vector<SurveyRecord> read_survey_csv(const std::filesystem::path& path);
std::vector<SurveyRecord> read_survey_csv(std::istream& in, std::string_view name = "<stream>");

struct FineTuneJob {
  std::size_t epochs = 3;
  std::size_t batch_size = 11;
};

struct FineTuneSummary {
  std::size_t records = 0;
  std::size_t lines = 0;
  std::size_t estimated_tokens = 0;
};

// Writes one line per record to `out` and a `<out>.meta.json` sidecar with
// the template version, job hyperparameters and token estimate. Throws
// StorageError.
FineTuneSummary write_training_file(const std::vector<SurveyRecord>& records,
                                    const std::filesystem::path& out,
                                    SpecialCodes special = SpecialCodes::Keep,
                                    const FineTuneJob& job = {});

// Sum of approx_tokens over every message content in a training file. An
// approximation of a vendor tokenizer count. Throws StorageError when the
// file cannot be read and InputError on malformed lines.
std::size_t estimate_tokens(const std::filesystem::path& training_file);
std::size_t estimate_tokens(const TrainingExample& example);

}  // namespace laca
