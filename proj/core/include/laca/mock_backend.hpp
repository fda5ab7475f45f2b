#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <tuple>

#include "laca/backend.hpp"

namespace laca {

struct BiasParams {
  double mean = 0.0;    // in [-2, 2]
  double spread = 0.0;  // standard deviation of the latent score, >= 0
};

using BiasKey = std::tuple<Persona, Source, Candidate>;

struct MockParams {
  std::map<BiasKey, BiasParams> bias;
  BiasParams fallback{0.0, 0.75};  // for keys absent from `bias`
  // Share of latent variance common to every coder on the same
  // (transcript, chunk, candidate); in [0, 1].
  double unit_correlation = 0.0;

  // Throws ConfigError.
  void validate() const;
  const BiasParams& lookup(Persona p, Source s, Candidate c) const;
};

// Additive outlet + persona lean: each outlet tilts toward its own side, and
// the two partisan personas add equal and opposite tilts.
MockParams partisan_mock_params();

// Deterministic offline backend. The score for a request is a pure function
// of (seed, coder, transcript, chunk, candidate): a latent normal draw built
// from counter-based hashes, shifted by the configured mean, rounded and
// clamped to {-2..2}.
class MockBackend final : public ChatBackend {
 public:
  MockBackend(MockParams params, std::uint64_t seed);

  ChatResult complete(const ChatRequest& request) override;
  std::string_view name() const override { return "mock"; }

  int score(const RequestContext& ctx) const;
  std::size_t calls() const { return calls_.load(); }

 private:
  MockParams params_;
  std::uint64_t seed_;
  std::atomic<std::size_t> calls_{0};
};

}  // namespace laca
