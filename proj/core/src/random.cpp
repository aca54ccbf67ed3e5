#include "gdht/random.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace gdht {

Identifier random_identifier(std::mt19937_64& rng, const MetricParams& params) {
    const std::uint64_t lo = rng();
    const std::uint64_t mid = rng();
    const auto hi = static_cast<std::uint32_t>(rng());
    return Identifier{Uint160(hi, mid, lo) & params.modulus_mask()};
}

std::vector<Identifier> random_population(std::size_t count, const MetricParams& params,
                                          std::uint64_t seed) {
    if (params.width() < 64 && count > (std::uint64_t{1} << params.width())) {
        throw std::invalid_argument("population larger than the identifier space");
    }
    std::mt19937_64 rng(seed);
    std::set<Identifier> ids;
    while (ids.size() < count) ids.insert(random_identifier(rng, params));
    return {ids.begin(), ids.end()};
}

std::size_t random_index(std::mt19937_64& rng, std::size_t bound) {
    return static_cast<std::size_t>(rng() % bound);
}

}  // namespace gdht
