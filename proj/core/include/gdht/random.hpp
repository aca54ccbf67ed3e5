#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gdht/identifier.hpp"

namespace gdht {

/// Uniform W-bit identifier. Built from raw engine words so results do not
/// depend on the standard library's distribution implementation.
Identifier random_identifier(std::mt19937_64& rng, const MetricParams& params);

/// `count` distinct uniform identifiers, sorted. Throws if count exceeds 2^W.
std::vector<Identifier> random_population(std::size_t count, const MetricParams& params,
                                          std::uint64_t seed);

/// Index in [0, bound).
std::size_t random_index(std::mt19937_64& rng, std::size_t bound);

}  // namespace gdht
