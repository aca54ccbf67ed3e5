#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "harness/commands.hpp"

using namespace gdht;
using namespace gdht::harness;

int main(int argc, char** argv) {
    CLI::App app{"Generalized DHT distance metric simulator"};
    app.require_subcommand(1);
    app.fallthrough();

    Scenario scenario;
    std::string algorithm = "tapestry";
    std::string nodes_file;
    std::string fixtures_dir;
    bool farthest_policy = false;
    app.add_option("--algorithm,-a", algorithm, "chord, pastry, tapestry or kademlia")
        ->check(CLI::IsMember({"chord", "pastry", "tapestry", "kademlia"}));
    app.add_option("--d", scenario.d, "digit bits (default 4; kademlia 1)");
    app.add_option("--k", scenario.k, "digits per identifier; W = d*k (default W=16)");
    app.add_option("--m", scenario.m, "chord finger stride")->capture_default_str();
    app.add_option("--leafset", scenario.leafset, "pastry leafset size")->capture_default_str();
    app.add_option("--nodes", nodes_file, "node file, one hex id per line")->check(CLI::ExistingFile);
    app.add_option("--random", scenario.random_nodes, "use N seeded random node ids");
    app.add_option("--fixtures", fixtures_dir, "directory of <HEX>.txt table fixtures")->check(CLI::ExistingDirectory);
    app.add_option("--budget", scenario.budget_spec, "row budgets: all=X and/or <hex>=X, comma separated");
    app.add_option("--seed", scenario.seed, "seed for random populations and samples")->capture_default_str();
    app.add_flag("--farthest-policy", farthest_policy, "invert the table selection rule")->group("");

    auto* tables = app.add_subcommand("tables", "print a node's routing table");
    std::string node;
    bool tables_validate = false;
    tables->add_option("node", node, "owner id")->required();
    tables->add_flag("--validate", tables_validate, "append the validation report");

    auto* lookup_cmd = app.add_subcommand("lookup", "trace a greedy lookup");
    std::string source, hash;
    lookup_cmd->add_option("source", source, "source node")->required();
    lookup_cmd->add_option("hash", hash, "target hash id")->required();

    auto* sweep = app.add_subcommand("sweep", "compare greedy roots with the brute-force oracle");
    SweepOptions sweep_options;
    std::string sweep_csv;
    sweep->add_flag("--exhaustive", sweep_options.exhaustive, "every hash from every source (default)");
    sweep->add_option("--sample", sweep_options.sample, "N random hashes from every source");
    sweep->add_flag("--validate", sweep_options.validate, "validate every table before sweeping");
    sweep->add_option("--csv", sweep_csv, "also write the CSV here");
    sweep->add_option("--threads", sweep_options.threads, "worker threads (0 = all cores)");

    auto* churn = app.add_subcommand("churn", "replay a churn script");
    ChurnOptions churn_options;
    churn->add_option("script", churn_options.script, "script file")->required()->check(CLI::ExistingFile);
    churn->add_flag("--validate", churn_options.validate, "validate every table after each membership change");

    auto* stats = app.add_subcommand("stats", "hop counts per row budget");
    StatsOptions stats_options;
    std::string stats_csv;
    stats->add_option("--budgets", stats_options.budgets, "comma separated budgets, 'full' allowed")->required();
    stats->add_option("--lookups", stats_options.lookups, "random lookups per budget")->capture_default_str();
    stats->add_option("--csv", stats_csv, "also write the CSV here");
    stats->add_option("--threads", stats_options.threads, "worker threads (0 = all cores)");

    auto* examples = app.add_subcommand("paper-examples", "check the 18-node worked examples");
    bool invert_kademlia = false;
    examples->add_flag("--invert-kademlia-ties", invert_kademlia, "pick the farthest bucket candidate")->group("");

    auto* hash_cmd = app.add_subcommand("hash", "hash text to a W-bit id with SHA-1");
    std::string text;
    hash_cmd->add_option("text", text, "text to hash")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    return run_guarded(
        [&]() -> int {
            scenario.algorithm = parse_algorithm(algorithm);
            if (!nodes_file.empty()) scenario.nodes_file = nodes_file;
            if (!fixtures_dir.empty()) scenario.fixtures_dir = fixtures_dir;
            if (farthest_policy) scenario.policy = SelectionPolicy::MetricFarthest;
            if (!sweep_csv.empty()) sweep_options.csv = sweep_csv;
            if (!stats_csv.empty()) stats_options.csv = stats_csv;

            if (*tables) return cmd_tables(scenario, node, tables_validate, std::cout, std::cerr);
            if (*lookup_cmd) return cmd_lookup(scenario, source, hash, std::cout, std::cerr);
            if (*sweep) return cmd_sweep(scenario, sweep_options, std::cout, std::cerr);
            if (*churn) return cmd_churn(scenario, churn_options, std::cout, std::cerr);
            if (*stats) return cmd_stats(scenario, stats_options, std::cout, std::cerr);
            if (*examples) {
                ExampleHooks hooks;
                hooks.chord_stride = scenario.m;
                if (invert_kademlia) hooks.kademlia_policy = SelectionPolicy::MetricFarthest;
                return cmd_worked_examples(hooks, std::cout, std::cerr);
            }
            return cmd_hash(scenario, text, std::cout, std::cerr);
        },
        std::cerr);
}
