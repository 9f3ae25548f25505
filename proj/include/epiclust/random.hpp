#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace epiclust {

using Rng = std::mt19937_64;

/// Independent generator for one logical stream, e.g. (seed, restart) or
/// (seed, window, trial). Streams depend only on their keys, never on the
/// order in which they are created.
Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> keys = {});

/// Mixes `keys` into `seed` (SplitMix64 finaliser per key).
std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> keys);

// The standard distributions are implementation-defined; these are not, so
// seeded output is identical across standard libraries.

/// Uniform on [0, 1).
double uniform01(Rng& rng);

/// Uniform on {0, ..., n - 1}; n must be positive.
std::size_t uniform_index(Rng& rng, std::size_t n);

double standard_normal(Rng& rng);

} // namespace epiclust
