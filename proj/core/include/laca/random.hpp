#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace laca {

// SplitMix64 finalizer. Used as a counter-based generator: the output for a
// given input never depends on call order.
std::uint64_t mix64(std::uint64_t x);

// 64-bit FNV-1a, chained through `basis` so several fields can be folded.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xcbf29ce484222325ULL);

// Lower-case, zero-padded 16-digit hex.
std::string hex64(std::uint64_t v);

// Maps a 64-bit word onto [0, 1) using its top 53 bits.
double unit_interval(std::uint64_t bits);

// Chooses `k` distinct indices from [0, population) uniformly without
// replacement. The result is sorted ascending and is a pure function of
// (population, k, seed) on every platform.
std::vector<std::size_t> sample_indices(std::size_t population, std::size_t k, std::uint64_t seed);

}  // namespace laca
