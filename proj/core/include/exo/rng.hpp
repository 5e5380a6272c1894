#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <string_view>

namespace exo {

/// Every stochastic operation in the library draws from an explicit Rng.
/// The engine is the standard 64-bit Mersenne Twister, whose raw output is
/// fixed by the C++ standard. Uniform and categorical draws go through the
/// helpers below; only the Dirichlet sampler uses a std:: distribution.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer. Used to derive independent substream seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Counter-based seed derivation: folds each tag into the root with
/// SplitMix64. derive_seed(s, {a, b}) != derive_seed(s, {b, a}).
std::uint64_t derive_seed(std::uint64_t root, std::initializer_list<std::uint64_t> tags) noexcept;

/// FNV-1a hash, for turning stream names ("episode", "env") into tags.
std::uint64_t tag(std::string_view name) noexcept;

/// Uniform double in [0, 1) from the top 53 bits of one engine draw.
double uniform01(Rng& rng) noexcept;

/// Same mapping applied to an already-mixed 64-bit value.
double to_unit_interval(std::uint64_t bits) noexcept;

/// Inverse-CDF draw from a probability vector. Falls back to the last index
/// with positive mass if rounding leaves the cumulative sum short of u.
std::size_t sample_categorical(std::span<const double> probs, Rng& rng);

}  // namespace exo
