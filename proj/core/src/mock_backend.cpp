#include "laca/mock_backend.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "laca/error.hpp"
#include "laca/random.hpp"

namespace laca {
namespace {

// Standard normal from two hashed uniforms (Box-Muller).
double normal_from(std::uint64_t key) {
  const double u1 = 1.0 - unit_interval(mix64(key ^ 0x5bd1e995ULL));  // (0, 1]
  const double u2 = unit_interval(mix64(key ^ 0x27d4eb2fULL));
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t unit_key(std::uint64_t seed, const RequestContext& ctx) {
  std::uint64_t h = mix64(seed);
  h = fnv1a64(ctx.transcript_id, h);
  h = mix64(h ^ static_cast<std::uint64_t>(ctx.chunk_index));
  h = mix64(h ^ (static_cast<std::uint64_t>(ctx.candidate) + 1) * 0x9e3779b97f4a7c15ULL);
  return h;
}

}  // namespace

void MockParams::validate() const {
  auto check = [](const BiasParams& b, std::string_view where) {
    if (!(b.mean >= -2.0 && b.mean <= 2.0)) {
      throw ConfigError(fmt::format("mock bias {}: mean {} outside [-2, 2]", where, b.mean));
    }
    if (!(b.spread >= 0.0) || !std::isfinite(b.spread)) {
      throw ConfigError(fmt::format("mock bias {}: spread {} must be >= 0", where, b.spread));
    }
  };
  for (const auto& [key, b] : bias) {
    const auto& [p, s, c] = key;
    check(b, fmt::format("({}, {}, {})", to_string(p), to_string(s), to_string(c)));
  }
  check(fallback, "fallback");
  if (!(unit_correlation >= 0.0 && unit_correlation <= 1.0)) {
    throw ConfigError(fmt::format("mock unit_correlation {} outside [0, 1]", unit_correlation));
  }
}

const BiasParams& MockParams::lookup(Persona p, Source s, Candidate c) const {
  auto it = bias.find({p, s, c});
  return it == bias.end() ? fallback : it->second;
}

MockParams partisan_mock_params() {
  constexpr double kOutletLean = 0.4;
  constexpr double kPersonaLean = 0.4;
  constexpr double kSpread = 0.6;
  MockParams params;
  for (auto persona : {Persona::None, Persona::Democrat, Persona::Republican}) {
    const double persona_sign =
        persona == Persona::Democrat ? 1.0 : persona == Persona::Republican ? -1.0 : 0.0;
    for (auto source : kAllSources) {
      const double outlet_sign = source == Source::MSNBC ? 1.0 : -1.0;
      for (auto cand : kAllCandidates) {
        const double toward = cand == Candidate::Biden ? 1.0 : -1.0;
        const double mean = toward * (outlet_sign * kOutletLean + persona_sign * kPersonaLean);
        params.bias[{persona, source, cand}] = {mean, kSpread};
      }
    }
  }
  params.unit_correlation = 0.5;
  return params;
}

MockBackend::MockBackend(MockParams params, std::uint64_t seed)
    : params_(std::move(params)), seed_(seed) {
  params_.validate();
}

int MockBackend::score(const RequestContext& ctx) const {
  const auto& bias = params_.lookup(ctx.persona, ctx.source, ctx.candidate);
  const std::uint64_t shared = unit_key(seed_, ctx);
  const std::uint64_t own = mix64(shared ^ ((static_cast<std::uint64_t>(ctx.coder) + 1) << 56));
  const double rho = params_.unit_correlation;
  const double z = std::sqrt(rho) * normal_from(shared) + std::sqrt(1.0 - rho) * normal_from(own);
  const double latent = bias.mean + bias.spread * z;
  return static_cast<int>(std::clamp(std::round(latent), -2.0, 2.0));
}

ChatResult MockBackend::complete(const ChatRequest& request) {
  ++calls_;
  return ChatResult::success(std::to_string(score(request.context)));
}

}  // namespace laca
