#pragma once

#include <cstdint>
#include <random>

namespace simaudit {

using Engine = std::mt19937_64;

// Engine keyed by (seed, stream). seed_seq is fully specified by the
// standard, so the same pair yields the same sequence on every platform.
Engine seeded_engine(std::uint64_t seed, std::uint64_t stream = 0);

// Uniform double in [0, 1) from the top 53 bits of one draw.
double unit_uniform(Engine& engine);

// Standard normal variate (Boost's portable ziggurat).
double standard_normal(Engine& engine);

}  // namespace simaudit
