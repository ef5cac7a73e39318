#pragma once

#include <cstdint>
#include <random>

namespace sfac {

/// Generator used by every sampler. Output is bit-identical for a given seed
/// on a given standard library; distribution algorithms are
/// implementation-defined across libraries.
using Rng = std::mt19937_64;

/// SplitMix64 finalizer; decorrelates nearby seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed of replication `index` derived from a base seed.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

Rng make_rng(std::uint64_t seed);

}  // namespace sfac
