#pragma once

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "laca/types.hpp"

namespace laca {

// Relationship between two coders:
//   ZeroShotPair      DZ-FZ
//   WithinDemocrat    DD-FD
//   WithinRepublican  DR-FR
//   CrossPartisan     DD-DR, DD-FR, FD-DR, FD-FR
//   Mixed             every other pair (one zero-shot coder, one persona coder)
enum class PairLabel { ZeroShotPair, WithinDemocrat, WithinRepublican, CrossPartisan, Mixed };

std::string_view to_string(PairLabel label);
PairLabel parse_pair_label(std::string_view text);

// Throws InputError for a coder paired with itself. Order-insensitive.
PairLabel pair_label(CoderId a, CoderId b);

bool is_within_community(PairLabel label);

// All unordered pairs of `coders`, in lexicographic order of position.
std::vector<std::pair<CoderId, CoderId>> coder_pairs(const std::vector<CoderId>& coders);

enum class Congruence { Congruent, CrossCutting };

std::string_view to_string(Congruence c);

// Democrat x MSNBC and Republican x FoxNews are congruent; the other
// partisan cells are cross-cutting. Zero-shot coders have no partisanship,
// so the result is nullopt for Persona::None.
std::optional<Congruence> congruence(Persona persona, Source source);

}  // namespace laca
