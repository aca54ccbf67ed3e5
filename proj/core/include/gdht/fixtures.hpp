#pragma once

#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gdht/routing_tables.hpp"

namespace gdht {

class FixtureError : public std::runtime_error {
public:
    FixtureError(const std::string& what, std::size_t line)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

// Per-node table files, one cell per line, '#' comments allowed:
//   tapestry / pastry   column <1-based column> <hex digit> <entry>
//   pastry / chord      leafset P|S <entry>       (listed nearest first)
//   chord               finger <0-based index> <entry>
//   kademlia            bucket <1-based index> <entry>
// Omitted lines are empty cells.

RoutingState parse_fixture(std::string_view text, Algorithm algorithm, const Identifier& owner,
                           const MetricParams& params);
std::string render_fixture(const RoutingState& state, const MetricParams& params);

/// Loads every `<HEX>.txt` file in `dir`; the stem names the owner. Other
/// extensions are ignored; a `.txt` stem that is not an id is an error.
std::map<Identifier, RoutingState> load_fixture_dir(const std::filesystem::path& dir,
                                                    Algorithm algorithm, const MetricParams& params);

}  // namespace gdht
