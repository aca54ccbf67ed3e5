#pragma once

#include <string_view>
#include <vector>

#include "gdht/identifier.hpp"

namespace gdht::harness {

/// The 18-node, 16-bit worked-example population.
inline constexpr std::string_view kExampleNodes[] = {
    "0156", "0359", "0379", "03A6", "03A9", "03AF", "04A5", "25AB", "456B",
    "4ABC", "4E56", "4EAB", "4ECD", "4EF7", "4EFB", "4EFC", "4EFD", "6754",
};
inline constexpr unsigned kExampleWidth = 16;
inline constexpr std::string_view kExampleSource = "03A6";
inline constexpr std::string_view kExampleTarget = "4EFA";
inline constexpr std::string_view kExampleRoot = "4EFB";

struct TableFixture {
    std::string_view owner;
    std::string_view text;  // fixture file format
};

/// Reference Tapestry tables (d=4). Loaded verbatim: their representative
/// choices do not all follow one selection rule.
extern const std::vector<TableFixture> kTapestryTables;
/// Reference Chord finger tables and leafsets (m=2).
extern const std::vector<TableFixture> kChordTables;
/// Reference Kademlia tables (d=1).
extern const std::vector<TableFixture> kKademliaTables;
/// Reference Pastry table and leafset of 03A6 (d=4, leafset 4).
extern const std::vector<TableFixture> kPastryTables;

struct ExpectedTrace {
    Algorithm algorithm;
    std::vector<std::string_view> path;  // empty when only endpoints are known
    std::string_view first_hop;
    std::string_view root;
};

extern const std::vector<ExpectedTrace> kExpectedTraces;

std::vector<Identifier> example_nodes(const MetricParams& params);

}  // namespace gdht::harness
