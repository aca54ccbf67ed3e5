#include "scenario.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "gdht/fixtures.hpp"
#include "gdht/random.hpp"
#include "worked_example.hpp"

namespace gdht::harness {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

unsigned parse_rows(std::string_view text, std::string_view context) {
    unsigned value = 0;
    if (text.empty() || text.size() > 4) throw ConfigError(fmt::format("bad budget in '{}'", context));
    for (char c : text) {
        if (c < '0' || c > '9') throw ConfigError(fmt::format("bad budget in '{}'", context));
        value = value * 10 + static_cast<unsigned>(c - '0');
    }
    return value;
}

}  // namespace

MetricParams Scenario::params() const {
    if (algorithm == Algorithm::Kademlia && d != 0 && d != 1) {
        throw ConfigError("kademlia uses one-bit digits; --d must be 1");
    }
    unsigned digit_bits = d;
    if (digit_bits == 0) digit_bits = algorithm == Algorithm::Kademlia ? 1 : 4;
    const unsigned width = k == 0 ? 16 : digit_bits * k;
    if (width == 0 || width > Uint160::kBits) {
        throw ConfigError(fmt::format("identifier width {} is outside 1..{}", width, Uint160::kBits));
    }
    try {
        // Chord's metric is single-digit; d only fixes W there.
        const unsigned metric_digits = algorithm == Algorithm::Chord ? 0 : digit_bits;
        const unsigned leaves = algorithm == Algorithm::Chord ? 2 : leafset;
        return MetricParams::for_algorithm(algorithm, width, metric_digits, m, leaves);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

std::vector<Identifier> Scenario::nodes(const MetricParams& p) const {
    if (nodes_file && random_nodes > 0) throw ConfigError("--nodes and --random are mutually exclusive");
    if (nodes_file) return parse_node_list(read_file(*nodes_file), p);
    if (random_nodes > 0) return random_population(random_nodes, p, seed);
    if (p.width() != kExampleWidth) {
        throw ConfigError("the built-in population is 16-bit; pass --nodes or --random for other widths");
    }
    return example_nodes(p);
}

BudgetPlan Scenario::budgets(const MetricParams& p) const {
    if (budget_spec.empty()) return {};
    if (algorithm != Algorithm::Tapestry && algorithm != Algorithm::Pastry) {
        throw ConfigError("row budgets apply to tapestry and pastry only");
    }
    return parse_budget_spec(budget_spec, p);
}

SnapshotOptions Scenario::options(const MetricParams& p) const {
    SnapshotOptions o;
    o.policy = policy;
    o.budgets = budgets(p);
    if (fixtures_dir) o.fixtures = load_fixture_dir(*fixtures_dir, algorithm, p);
    return o;
}

std::vector<Identifier> parse_node_list(std::string_view text, const MetricParams& params) {
    std::vector<Identifier> out;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find('\n', start), text.size());
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        try {
            out.push_back(parse_id(line, params));
        } catch (const ParseError& e) {
            throw ParseError(fmt::format("line {}: {}", line_no, e.what()), line_no);
        }
    }
    return out;
}

BudgetPlan parse_budget_spec(std::string_view text, const MetricParams& params) {
    BudgetPlan plan;
    const unsigned ceiling = params.radix() - 1;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto end = std::min(text.find(',', start), text.size());
        const std::string_view item = trim(text.substr(start, end - start));
        start = end + 1;
        const auto eq = item.find('=');
        if (eq == std::string_view::npos) throw ConfigError(fmt::format("budget item '{}' needs '='", item));
        const std::string_view who = trim(item.substr(0, eq));
        const unsigned rows = parse_rows(trim(item.substr(eq + 1)), item);
        if (rows < 2 || rows > ceiling) {
            throw ConfigError(fmt::format("budget {} is outside [2, {}]", rows, ceiling));
        }
        if (who == "all") {
            plan.all = rows;
        } else {
            try {
                plan.per_node[parse_id(who, params)] = rows;
            } catch (const ParseError& e) {
                throw ConfigError(fmt::format("budget node '{}': {}", who, e.what()));
            }
        }
    }
    return plan;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("cannot read {}", path.string()));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace gdht::harness
