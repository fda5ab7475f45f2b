#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace laca {

enum class Source : std::uint8_t { FoxNews, MSNBC };
enum class Candidate : std::uint8_t { Biden, Trump };
enum class Persona : std::uint8_t { None, Democrat, Republican };

// The six coder configurations: {Default, Fine-tuned} x {Zero-shot,
// Democrat, Republican}. Declaration order is the canonical report order.
enum class CoderId : std::uint8_t { DZ, DD, DR, FZ, FD, FR };

inline constexpr std::array<Source, 2> kAllSources = {Source::FoxNews, Source::MSNBC};
inline constexpr std::array<Candidate, 2> kAllCandidates = {Candidate::Biden, Candidate::Trump};
inline constexpr std::array<CoderId, 6> kAllCoders = {CoderId::DZ, CoderId::DD, CoderId::DR,
                                                      CoderId::FZ, CoderId::FD, CoderId::FR};

std::string_view to_string(Source s);
std::string_view to_string(Candidate c);
std::string_view to_string(Persona p);
std::string_view to_string(CoderId id);

// "Joe Biden" / "Donald Trump".
std::string_view full_name(Candidate c);

// Accepts the canonical names plus the short CLI spellings "fox" / "msnbc"
// (case-insensitive). Throws InputError.
Source parse_source(std::string_view text);
Candidate parse_candidate(std::string_view text);
CoderId parse_coder_id(std::string_view text);

Persona persona_of(CoderId id);
bool is_finetuned(CoderId id);

}  // namespace laca
