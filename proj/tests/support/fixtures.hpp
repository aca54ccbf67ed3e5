#pragma once

#include <string_view>
#include <vector>

#include "gdht/identifier.hpp"

namespace testdata {

inline const std::vector<std::string_view> kNodes = {
    "0156", "0359", "0379", "03A6", "03A9", "03AF", "04A5", "25AB", "456B",
    "4ABC", "4E56", "4EAB", "4ECD", "4EF7", "4EFB", "4EFC", "4EFD", "6754",
};

inline std::vector<gdht::Identifier> nodes(const gdht::MetricParams& p) {
    std::vector<gdht::Identifier> out;
    for (auto s : kNodes) out.push_back(gdht::parse_id(s, p));
    return out;
}

inline gdht::Identifier id(std::string_view hex, const gdht::MetricParams& p) { return gdht::parse_id(hex, p); }

inline gdht::MetricParams chord16() { return gdht::MetricParams::for_algorithm(gdht::Algorithm::Chord, 16); }
inline gdht::MetricParams pastry16() { return gdht::MetricParams::for_algorithm(gdht::Algorithm::Pastry, 16); }
inline gdht::MetricParams tapestry16() { return gdht::MetricParams::for_algorithm(gdht::Algorithm::Tapestry, 16); }
inline gdht::MetricParams kademlia16() { return gdht::MetricParams::for_algorithm(gdht::Algorithm::Kademlia, 16); }

inline gdht::MetricParams params_for(gdht::Algorithm a) { return gdht::MetricParams::for_algorithm(a, 16); }

inline const std::vector<gdht::Algorithm> kAlgorithms = {
    gdht::Algorithm::Chord, gdht::Algorithm::Pastry, gdht::Algorithm::Tapestry, gdht::Algorithm::Kademlia};

}  // namespace testdata
