#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gdht/identifier.hpp"
#include "gdht/snapshot.hpp"

namespace gdht::harness {

/// Bad flags or inconsistent parameters; maps to exit code 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Scenario {
    Algorithm algorithm = Algorithm::Tapestry;
    unsigned d = 0;        // digit bits; 0 picks the algorithm default
    unsigned k = 0;        // digits; 0 means W = 16
    unsigned m = 2;        // chord finger stride
    unsigned leafset = 4;  // pastry leafset size (chord always keeps 1+1)
    std::optional<std::filesystem::path> nodes_file;
    std::optional<std::filesystem::path> fixtures_dir;
    std::size_t random_nodes = 0;  // seeded uniform population when > 0
    std::string budget_spec;       // "all=X" and/or "<hex>=X" pairs, comma separated
    std::uint64_t seed = 1;
    SelectionPolicy policy = SelectionPolicy::MetricNearest;

    /// Throws ConfigError when (d, k, m, leafset) do not fit the algorithm.
    MetricParams params() const;
    /// Node file, random population, or the built-in 18-node example.
    std::vector<Identifier> nodes(const MetricParams& params) const;
    BudgetPlan budgets(const MetricParams& params) const;
    SnapshotOptions options(const MetricParams& params) const;
};

/// One hex id per line; blank lines and '#' comments are skipped.
/// Throws ParseError whose position is the line number.
std::vector<Identifier> parse_node_list(std::string_view text, const MetricParams& params);

/// Parses "all=X,03A6=Y,..." and checks 2 <= X <= 2^d - 1.
BudgetPlan parse_budget_spec(std::string_view text, const MetricParams& params);

std::string read_file(const std::filesystem::path& path);

}  // namespace gdht::harness
