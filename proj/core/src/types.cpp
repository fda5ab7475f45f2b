#include "laca/types.hpp"

#include <algorithm>
#include <cctype>

#include <fmt/format.h>

#include "laca/error.hpp"

namespace laca {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(Source s) {
  switch (s) {
    case Source::FoxNews: return "FoxNews";
    case Source::MSNBC: return "MSNBC";
  }
  return "?";
}

std::string_view to_string(Candidate c) {
  switch (c) {
    case Candidate::Biden: return "Biden";
    case Candidate::Trump: return "Trump";
  }
  return "?";
}

std::string_view to_string(Persona p) {
  switch (p) {
    case Persona::None: return "None";
    case Persona::Democrat: return "Democrat";
    case Persona::Republican: return "Republican";
  }
  return "?";
}

std::string_view to_string(CoderId id) {
  switch (id) {
    case CoderId::DZ: return "DZ";
    case CoderId::DD: return "DD";
    case CoderId::DR: return "DR";
    case CoderId::FZ: return "FZ";
    case CoderId::FD: return "FD";
    case CoderId::FR: return "FR";
  }
  return "?";
}

std::string_view full_name(Candidate c) {
  return c == Candidate::Biden ? "Joe Biden" : "Donald Trump";
}

Source parse_source(std::string_view text) {
  const auto s = lower(text);
  if (s == "fox" || s == "foxnews" || s == "fox news") return Source::FoxNews;
  if (s == "msnbc") return Source::MSNBC;
  throw InputError(fmt::format("unknown source '{}'", text));
}

Candidate parse_candidate(std::string_view text) {
  const auto s = lower(text);
  if (s == "biden") return Candidate::Biden;
  if (s == "trump") return Candidate::Trump;
  throw InputError(fmt::format("unknown candidate '{}'", text));
}

CoderId parse_coder_id(std::string_view text) {
  for (auto id : kAllCoders) {
    if (lower(to_string(id)) == lower(text)) return id;
  }
  throw InputError(fmt::format("unknown coder id '{}'", text));
}

Persona persona_of(CoderId id) {
  switch (id) {
    case CoderId::DZ:
    case CoderId::FZ: return Persona::None;
    case CoderId::DD:
    case CoderId::FD: return Persona::Democrat;
    case CoderId::DR:
    case CoderId::FR: return Persona::Republican;
  }
  return Persona::None;
}

bool is_finetuned(CoderId id) {
  return id == CoderId::FZ || id == CoderId::FD || id == CoderId::FR;
}

}  // namespace laca
