#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "gdht/lookup.hpp"
#include "gdht/overlay.hpp"
#include "scenario.hpp"

namespace gdht::harness {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 2,
    kExitRouting = 3,
    kExitVerification = 4,
};

std::string render_table(const RoutingState& state, const MetricParams& params);
std::string render_report(const ValidationReport& report);
/// `<index> <node> <distance>` per forwarding node, then `ROOT <node>`.
std::string render_trace(const LookupTrace& trace, const MetricParams& params);

int cmd_tables(const Scenario& scenario, std::string_view node, bool validate, std::ostream& out,
               std::ostream& err);

int cmd_lookup(const Scenario& scenario, std::string_view source, std::string_view hash,
               std::ostream& out, std::ostream& err);

struct SweepOptions {
    bool exhaustive = false;
    std::optional<std::uint64_t> sample;  // random hashes per source
    bool validate = false;
    std::optional<std::filesystem::path> csv;
    unsigned threads = 0;
};
int cmd_sweep(const Scenario& scenario, const SweepOptions& options, std::ostream& out, std::ostream& err);

struct ChurnOptions {
    std::filesystem::path script;
    bool validate = false;
};
int cmd_churn(const Scenario& scenario, const ChurnOptions& options, std::ostream& out, std::ostream& err);

struct StatsOptions {
    std::string budgets;  // "2,4,full"
    std::uint64_t lookups = 1000;
    std::optional<std::filesystem::path> csv;
    unsigned threads = 0;
};
int cmd_stats(const Scenario& scenario, const StatsOptions& options, std::ostream& out, std::ostream& err);

/// Knobs that deliberately break the worked examples.
struct ExampleHooks {
    SelectionPolicy kademlia_policy = SelectionPolicy::MetricNearest;
    unsigned chord_stride = 2;
};
int cmd_worked_examples(const ExampleHooks& hooks, std::ostream& out, std::ostream& err);

/// Top W bits of SHA-1(text), as a hash id.
int cmd_hash(const Scenario& scenario, std::string_view text, std::ostream& out, std::ostream& err);

/// Runs `body`, turning the harness's exception types into exit codes and
/// messages on `err`.
int run_guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace gdht::harness
