#include "laca/taxonomy.hpp"

#include <fmt/format.h>

#include "laca/error.hpp"

namespace laca {

std::string_view to_string(PairLabel label) {
  switch (label) {
    case PairLabel::ZeroShotPair: return "ZeroShotPair";
    case PairLabel::WithinDemocrat: return "WithinDemocrat";
    case PairLabel::WithinRepublican: return "WithinRepublican";
    case PairLabel::CrossPartisan: return "CrossPartisan";
    case PairLabel::Mixed: return "Mixed";
  }
  return "?";
}

PairLabel parse_pair_label(std::string_view text) {
  for (auto l : {PairLabel::ZeroShotPair, PairLabel::WithinDemocrat, PairLabel::WithinRepublican,
                 PairLabel::CrossPartisan, PairLabel::Mixed}) {
    if (to_string(l) == text) return l;
  }
  throw InputError(fmt::format("unknown pair label '{}'", text));
}

PairLabel pair_label(CoderId a, CoderId b) {
  if (a == b) throw InputError(fmt::format("coder {} paired with itself", to_string(a)));
  const auto pa = persona_of(a);
  const auto pb = persona_of(b);
  if (pa == Persona::None && pb == Persona::None) return PairLabel::ZeroShotPair;
  if (pa == Persona::None || pb == Persona::None) return PairLabel::Mixed;
  if (pa != pb) return PairLabel::CrossPartisan;
  return pa == Persona::Democrat ? PairLabel::WithinDemocrat : PairLabel::WithinRepublican;
}

bool is_within_community(PairLabel label) {
  return label == PairLabel::WithinDemocrat || label == PairLabel::WithinRepublican;
}

std::vector<std::pair<CoderId, CoderId>> coder_pairs(const std::vector<CoderId>& coders) {
  std::vector<std::pair<CoderId, CoderId>> out;
  for (std::size_t i = 0; i < coders.size(); ++i) {
    for (std::size_t j = i + 1; j < coders.size(); ++j) out.emplace_back(coders[i], coders[j]);
  }
  return out;
}

std::string_view to_string(Congruence c) {
  return c == Congruence::Congruent ? "Congruent" : "CrossCutting";
}

std::optional<Congruence> congruence(Persona persona, Source source) {
  switch (persona) {
    case Persona::Democrat:
      return source == Source::MSNBC ? Congruence::Congruent : Congruence::CrossCutting;
    case Persona::Republican:
      return source == Source::FoxNews ? Congruence::Congruent : Congruence::CrossCutting;
    case Persona::None: break;
  }
  return std::nullopt;
}

}  // namespace laca
