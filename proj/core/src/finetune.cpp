#include "laca/finetune.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>

#include <fmt/format.h>
#include <json.hpp>

#include "csv.hpp"
#include "laca/corpus.hpp"
#include "laca/error.hpp"

namespace laca {
namespace {

using Json = nlohmann::ordered_json;

constexpr std::array<std::pair<int, std::string_view>, 6> kSpecialLabels = {{
    {-7, "No answer"},
    {-6, "Unit non-response"},
    {-1, "Inapplicable (legitimate skip)"},
    {77, "Don't know"},
    {98, "Skipped on web"},
    {99, "Refused"},
}};

constexpr std::array<std::string_view, 3> kGender = {"Unknown", "Male", "Female"};

constexpr std::array<std::string_view, 4> kRace = {
    "White, non-Hispanic", "Black, non-Hispanic",
    "Other, non-Hispanic (includes Asian, non-Hispanic)", "Hispanic"};

constexpr std::array<std::string_view, 5> kEducation = {
    "Less than high school", "High school graduate or equivalent",
    "Vocational/tech school/some college/associates", "Bachelor's degree",
    "Postgraduate study/professional degree"};

constexpr std::array<std::string_view, 18> kIncome = {
    "Less than $5,000",     "$5,000 to $9,999",     "$10,000 to $14,999",   "$15,000 to $19,999",
    "$20,000 to $24,999",   "$25,000 to $29,999",   "$30,000 to $34,999",   "$35,000 to $39,999",
    "$40,000 to $49,999",   "$50,000 to $59,999",   "$60,000 to $74,999",   "$75,000 to $84,999",
    "$85,000 to $99,999",   "$100,000 to $124,999", "$125,000 to $149,999", "$150,000 to $174,999",
    "$175,000 to $199,999", "$200,000 or more"};

constexpr std::array<std::string_view, 7> kIdeology = {
    "Very liberal",           "Somewhat liberal",      "Closer to liberal",
    "Neither liberal nor conservative", "Closer to conservative", "Somewhat conservative",
    "Very conservative"};

constexpr std::array<std::string_view, 5> kTrust = {"Not at all", "A little", "A moderate amount",
                                                    "A lot", "A great deal"};

bool has_special_codes(SurveyField f) {
  switch (f) {
    case SurveyField::IdeologySelf:
    case SurveyField::IdeologyDemParty:
    case SurveyField::IdeologyRepParty:
    case SurveyField::TrustFox:
    case SurveyField::TrustMsnbc:
      return true;
    default:
      return false;
  }
}

template <std::size_t N>
std::optional<std::string_view> from_scale(const std::array<std::string_view, N>& labels, int code,
                                           int first) {
  const int idx = code - first;
  if (idx < 0 || idx >= static_cast<int>(N)) return std::nullopt;
  return labels[static_cast<std::size_t>(idx)];
}

std::optional<std::string> try_decode(SurveyField field, int code) {
  if (has_special_codes(field)) {
    for (const auto& [c, label] : kSpecialLabels) {
      if (c == code) return std::string(label);
    }
  }
  std::optional<std::string_view> label;
  switch (field) {
    case SurveyField::Gender: label = from_scale(kGender, code, 0); break;
    case SurveyField::Age:
      if (code >= 0 && code <= kMaxAge) return std::to_string(code);
      return std::nullopt;
    case SurveyField::RaceEthnicity: label = from_scale(kRace, code, 1); break;
    case SurveyField::Education: label = from_scale(kEducation, code, 1); break;
    case SurveyField::Income: label = from_scale(kIncome, code, 1); break;
    case SurveyField::IdeologySelf:
    case SurveyField::IdeologyDemParty:
    case SurveyField::IdeologyRepParty: label = from_scale(kIdeology, code, 1); break;
    case SurveyField::TrustFox:
    case SurveyField::TrustMsnbc: label = from_scale(kTrust, code, 1); break;
  }
  if (!label) return std::nullopt;
  return std::string(*label);
}

std::optional<int> parse_int(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace

std::string_view to_string(SurveyField field) {
  switch (field) {
    case SurveyField::Gender: return "gender";
    case SurveyField::Age: return "age";
    case SurveyField::RaceEthnicity: return "race_ethnicity";
    case SurveyField::Education: return "education";
    case SurveyField::Income: return "income";
    case SurveyField::IdeologySelf: return "ideology_self";
    case SurveyField::IdeologyDemParty: return "ideology_dem_party";
    case SurveyField::IdeologyRepParty: return "ideology_rep_party";
    case SurveyField::TrustFox: return "trust_fox";
    case SurveyField::TrustMsnbc: return "trust_msnbc";
  }
  return "?";
}

SurveyField parse_survey_field(std::string_view column) {
  for (auto f : kSurveyFields) {
    if (to_string(f) == column) return f;
  }
  throw InputError(fmt::format("unknown survey variable '{}'", column));
}

std::string_view question_text(SurveyField field) {
  switch (field) {
    case SurveyField::Gender: return "What is your gender?";
    case SurveyField::Age: return "What is your age?";
    case SurveyField::RaceEthnicity: return "What is your race/ethnicity?";
    case SurveyField::Education: return "What is your highest level of education?";
    case SurveyField::Income: return "What is your income level?";
    case SurveyField::IdeologySelf:
      return "When it comes to politics, would you describe yourself as liberal, conservative, "
             "or neither liberal nor conservative?";
    case SurveyField::IdeologyDemParty:
      return "When it comes to politics, would you describe the Democratic Party as liberal, "
             "conservative, or neither liberal nor conservative?";
    case SurveyField::IdeologyRepParty:
      return "When it comes to politics, would you describe the Republican Party as liberal, "
             "conservative, or neither liberal nor conservative?";
    case SurveyField::TrustFox:
      return "How much do you think political information from Fox News can be trusted?";
    case SurveyField::TrustMsnbc:
      return "How much do you think political information from MSNBC can be trusted?";
  }
  return "";
}

bool is_special_code(SurveyField field, int code) {
  if (!has_special_codes(field)) return false;
  return std::any_of(kSpecialLabels.begin(), kSpecialLabels.end(),
                     [code](const auto& p) { return p.first == code; });
}

std::string decode(SurveyField field, int code) {
  auto label = try_decode(field, code);
  if (!label) throw InputError(fmt::format("code {} is outside the domain of {}", code, to_string(field)));
  return *label;
}

void SurveyRecord::validate() const {
  for (auto f : kSurveyFields) {
    if (!try_decode(f, code(f))) {
      throw InputError(fmt::format("record '{}': code {} is outside the domain of {}", id, code(f),
                                   to_string(f)));
    }
  }
}

std::string_view to_string(SpecialCodes mode) { return mode == SpecialCodes::Keep ? "keep" : "drop"; }

SpecialCodes parse_special_codes(std::string_view text) {
  if (text == "keep") return SpecialCodes::Keep;
  if (text == "drop") return SpecialCodes::Drop;
  throw InputError(fmt::format("special-code handling must be keep or drop, got '{}'", text));
}

TrainingExample render(const SurveyRecord& record, SpecialCodes special) {
  record.validate();
  TrainingExample ex;
  ex.messages.reserve(2 * kSurveyFields.size());
  for (auto f : kSurveyFields) {
    const int code = record.code(f);
    if (special == SpecialCodes::Drop && is_special_code(f, code)) continue;
    ex.messages.push_back({"user", std::string(question_text(f))});
    ex.messages.push_back({"assistant", decode(f, code)});
  }
  return ex;
}

std::string to_jsonl(const TrainingExample& example) {
  Json messages = Json::array();
  for (const auto& m : example.messages) messages.push_back(Json{{"role", m.role}, {"content", m.content}});
  return Json{{"messages", std::move(messages)}}.dump();
}

std::vector<SurveyRecord> read_survey_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageError(fmt::format("cannot open '{}'", path.string()));
  return read_survey_csv(in, path.string());
}

std::vector<SurveyRecord> read_survey_csv(std::istream& in, std::string_view name) {
  std::size_t line = 0;
  auto header = csv::read_record(in, line);
  if (!header) throw InputError(fmt::format("{}: empty survey file", name));

  std::optional<std::size_t> id_col;
  std::array<std::optional<std::size_t>, 10> cols{};
  for (std::size_t i = 0; i < header->size(); ++i) {
    const auto& h = (*header)[i];
    if (h == "id") {
      id_col = i;
      continue;
    }
    for (auto f : kSurveyFields) {
      if (to_string(f) == h) cols[static_cast<std::size_t>(f)] = i;
    }
  }
  std::vector<std::string> absent;
  if (!id_col) absent.emplace_back("id");
  for (auto f : kSurveyFields) {
    if (!cols[static_cast<std::size_t>(f)]) absent.emplace_back(to_string(f));
  }
  if (!absent.empty()) {
    throw InputError(fmt::format("{}: missing column(s): {}", name, fmt::join(absent, ", ")));
  }

  std::vector<SurveyRecord> records;
  std::map<std::string, std::size_t> seen;
  while (true) {
    const std::size_t start = line + 1;
    auto rec = csv::read_record(in, line);
    if (!rec) break;
    if (rec->size() == 1 && (*rec)[0].empty()) continue;
    if (rec->size() != header->size()) {
      throw InputError(fmt::format("{}:{}: expected {} fields, got {}", name, start, header->size(),
                                   rec->size()));
    }
    SurveyRecord r;
    r.id = (*rec)[*id_col];
    if (r.id.empty()) throw InputError(fmt::format("{}:{}: empty id", name, start));
    if (auto [it, fresh] = seen.emplace(r.id, start); !fresh) {
      throw InputError(fmt::format("{}:{}: duplicate id '{}' (first on line {})", name, start, r.id,
                                   it->second));
    }
    for (auto f : kSurveyFields) {
      const auto& cell = (*rec)[*cols[static_cast<std::size_t>(f)]];
      auto v = parse_int(cell);
      if (!v) throw InputError(fmt::format("{}:{}: {} is not an integer: '{}'", name, start, to_string(f), cell));
      r.code(f) = *v;
    }
    try {
      r.validate();
    } catch (const InputError& e) {
      throw InputError(fmt::format("{}:{}: {}", name, start, e.what()));
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::size_t estimate_tokens(const TrainingExample& example) {
  std::size_t total = 0;
  for (const auto& m : example.messages) total += approx_tokens(m.content);
  return total;
}

FineTuneSummary write_training_file(const std::vector<SurveyRecord>& records,
                                    const std::filesystem::path& out, SpecialCodes special,
                                    const FineTuneJob& job) {
  FineTuneSummary summary;
  summary.records = records.size();
  std::string body;
  for (const auto& r : records) {
    const auto ex = render(r, special);
    summary.estimated_tokens += estimate_tokens(ex);
    body += to_jsonl(ex);
    body += '\n';
    ++summary.lines;
  }

  auto write_atomic = [](const std::filesystem::path& path, const std::string& text) {
    auto tmp = path;
    tmp += ".tmp";
    {
      std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
      if (!f) throw StorageError(fmt::format("cannot write '{}'", tmp.string()));
      f << text;
      f.flush();
      if (!f) throw StorageError(fmt::format("write to '{}' failed", tmp.string()));
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw StorageError(fmt::format("cannot replace '{}': {}", path.string(), ec.message()));
  };

  if (out.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(out.parent_path(), ec);
  }
  write_atomic(out, body);

  Json meta{{"template_version", kFineTuneTemplateVersion},
            {"records", summary.records},
            {"lines", summary.lines},
            {"special_codes", to_string(special)},
            {"epochs", job.epochs},
            {"batch_size", job.batch_size},
            {"estimated_tokens", summary.estimated_tokens},
            {"estimated_tokens_note",
             "word-count heuristic ceil(4w/3) over message contents, one pass; a vendor "
             "tokenizer count will differ"}};
  auto meta_path = out;
  meta_path += ".meta.json";
  write_atomic(meta_path, meta.dump(2) + "\n");
  return summary;
}

std::size_t estimate_tokens(const std::filesystem::path& training_file) {
  std::ifstream in(training_file, std::ios::binary);
  if (!in) throw StorageError(fmt::format("cannot open '{}'", training_file.string()));
  std::size_t total = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      for (const auto& m : j.at("messages")) total += approx_tokens(m.at("content").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw InputError(fmt::format("{}:{}: {}", training_file.string(), line_no, e.what()));
    }
  }
  if (in.bad()) throw StorageError(fmt::format("read from '{}' failed", training_file.string()));
  return total;
}

}  // namespace laca
