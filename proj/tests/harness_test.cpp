#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "gdht/fixtures.hpp"
#include "harness/commands.hpp"
#include "harness/worked_example.hpp"

using namespace gdht;
using namespace gdht::harness;

namespace {

const std::filesystem::path kData = std::filesystem::path(GDHT_DATA_DIR) / "worked";

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(const std::function<int(std::ostream&, std::ostream&)>& fn) {
    std::ostringstream out, err;
    const int code = run_guarded([&] { return fn(out, err); }, err);
    return {code, out.str(), err.str()};
}

Scenario scenario(Algorithm a) {
    Scenario s;
    s.algorithm = a;
    return s;
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

}  // namespace

TEST(WorkedExamples, AllPass) {
    const Outcome r = run([](auto& o, auto& e) { return cmd_worked_examples({}, o, e); });
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("0 failed"), std::string::npos);
}

TEST(WorkedExamples, InvertedKademliaTieRuleFailsBucket13) {
    ExampleHooks hooks;
    hooks.kademlia_policy = SelectionPolicy::MetricFarthest;
    const Outcome r = run([&](auto& o, auto& e) { return cmd_worked_examples(hooks, o, e); });
    EXPECT_EQ(r.code, kExitVerification);
    EXPECT_NE(r.out.find("FAIL kademlia table 03A6"), std::string::npos);
    EXPECT_NE(r.out.find("bucket 13: got 03A9, expected 03AF"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("PASS chord table 03A6"), std::string::npos);
}

TEST(WorkedExamples, ChordStrideFourFailsTheFingerTables) {
    ExampleHooks hooks;
    hooks.chord_stride = 4;
    const Outcome r = run([&](auto& o, auto& e) { return cmd_worked_examples(hooks, o, e); });
    EXPECT_EQ(r.code, kExitVerification);
    EXPECT_NE(r.out.find("FAIL chord table 03A6: entry count 4 != 8"), std::string::npos) << r.out;
}

TEST(Tables, Chord03A6) {
    const Outcome r = run([](auto& o, auto& e) { return cmd_tables(scenario(Algorithm::Chord), "03A6", true, o, e); });
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out,
              "chord 03A6 m=2\nfinger node\n0      03A9\n1      03AF\n2      04A5\n3      04A5\n4      25AB\n"
              "5      25AB\n6      25AB\n7      456B\nP      0379\nS      03A9\nvalidation: ok\n");
}

TEST(Tables, Kademlia03A6HasSixteenBuckets) {
    const Outcome r = run([](auto& o, auto& e) { return cmd_tables(scenario(Algorithm::Kademlia), "03A6", false, o, e); });
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 18u);
    EXPECT_EQ(l[2], "1      -");
    EXPECT_EQ(l[3], "2      456B");
    EXPECT_EQ(l[14], "13     03AF");
}

TEST(Tables, TapestryMatrixLayout) {
    const Outcome r = run([](auto& o, auto& e) { return cmd_tables(scenario(Algorithm::Tapestry), "03A6", false, o, e); });
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 18u);
    EXPECT_EQ(l[1], "digit  L1    L2    L3    L4");
    EXPECT_EQ(l[2 + 4], "4      456B  04A5  -     -");
}

TEST(Tables, UnknownNodeIsAUsageError) {
    const Outcome r = run([](auto& o, auto& e) { return cmd_tables(scenario(Algorithm::Chord), "FFFF", false, o, e); });
    EXPECT_EQ(r.code, kExitUsage);
    EXPECT_NE(r.err.find("FFFF"), std::string::npos);
}

TEST(Tables, ValidateFlagsABadFixture) {
    const auto dir = std::filesystem::temp_directory_path() / "gdht_bad_fixture";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "03A6.txt") << "column 1 4 456B\ncolumn 2 5 456B\n";
    Scenario s = scenario(Algorithm::Tapestry);
    s.fixtures_dir = dir;
    const Outcome r = run([&](auto& o, auto& e) { return cmd_tables(s, "03A6", true, o, e); });
    EXPECT_EQ(r.code, kExitVerification);
    EXPECT_NE(r.out.find("pattern-mismatch column 2 digit 5: 456B"), std::string::npos) << r.out;

    const Outcome sweep = run([&](auto& o, auto& e) {
        SweepOptions opt;
        opt.validate = true;
        return cmd_sweep(s, opt, o, e);
    });
    EXPECT_EQ(sweep.code, kExitVerification);
    EXPECT_TRUE(sweep.out.empty());
    std::filesystem::remove_all(dir);
}

TEST(Lookup, ChordTraceText) {
    const Outcome r = run([](auto& o, auto& e) { return cmd_lookup(scenario(Algorithm::Chord), "03A6", "4EFA", o, e); });
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "0 03A6 B4AC\n1 456B F671\n2 4ABC FBC2\n3 4ECD FFD3\n4 4EF7 FFFD\nROOT 4EFB\n");
}

TEST(Lookup, KademliaTraceText) {
    const Outcome r = run([](auto& o, auto& e) { return cmd_lookup(scenario(Algorithm::Kademlia), "03A6", "4EFA", o, e); });
    EXPECT_EQ(r.out, "0 03A6 4D5C\n1 456B 0B91\n2 4E56 00AC\n3 4ECD 0037\n4 4EFD 0007\nROOT 4EFB\n");
}

TEST(Lookup, SourceAtRootPrintsOnlyRoot) {
    const Outcome r = run([](auto& o, auto& e) { return cmd_lookup(scenario(Algorithm::Pastry), "4EFB", "4EFA", o, e); });
    EXPECT_EQ(r.out, "ROOT 4EFB\n");
}

TEST(Lookup, RoutingFailureExitsThree) {
    const auto dir = std::filesystem::temp_directory_path() / "gdht_nonmember_fixture";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "03A6.txt") << "column 1 4 4444\n";
    Scenario s = scenario(Algorithm::Tapestry);
    s.fixtures_dir = dir;
    const Outcome r = run([&](auto& o, auto& e) { return cmd_lookup(s, "03A6", "4EFA", o, e); });
    EXPECT_EQ(r.code, kExitRouting);
    EXPECT_EQ(r.out, "0 03A6 C5BC\n");
    std::filesystem::remove_all(dir);
}

TEST(Sweep, WorkedOverlayHasNoMismatches) {
    for (Algorithm a : {Algorithm::Chord, Algorithm::Pastry, Algorithm::Tapestry, Algorithm::Kademlia}) {
        Scenario s = scenario(a);
        s.nodes_file = kData / "nodes.txt";
        const Outcome r = run([&](auto& o, auto& e) { return cmd_sweep(s, {}, o, e); });
        EXPECT_EQ(r.code, 0) << r.err;
        const auto l = lines(r.out);
        ASSERT_EQ(l.size(), 2u);
        EXPECT_EQ(l[1].rfind(std::string(to_string(a)) + ",18,full,18,65536,0,", 0), 0u) << l[1];
    }
}

TEST(Sweep, SingletonHasZeroHops) {
    Scenario s = scenario(Algorithm::Tapestry);
    s.nodes_file = temp_file("gdht_single.txt", "# one node\n03A6\n");
    const auto csv = std::filesystem::temp_directory_path() / "gdht_single.csv";
    const Outcome r = run([&](auto& o, auto& e) {
        SweepOptions opt;
        opt.csv = csv;
        return cmd_sweep(s, opt, o, e);
    });
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find(",0,0.0000,0"), std::string::npos) << r.out;
    std::ifstream in(csv);
    std::stringstream file;
    file << in.rdbuf();
    EXPECT_EQ(file.str(), r.out);
}

TEST(Sweep, SampleAndExhaustiveAreExclusive) {
    const Outcome r = run([](auto& o, auto& e) {
        SweepOptions opt;
        opt.exhaustive = true;
        opt.sample = 5;
        return cmd_sweep(scenario(Algorithm::Chord), opt, o, e);
    });
    EXPECT_EQ(r.code, kExitUsage);
}

TEST(Churn, JoinAndLeaveScript) {
    ChurnOptions opt{kData / "churn_join_leave.txt", true};
    const Outcome r = run([&](auto& o, auto& e) { return cmd_churn(scenario(Algorithm::Kademlia), opt, o, e); });
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("JOIN 4EFA version=1 keys_moved=1"), std::string::npos);
    EXPECT_NE(r.out.find("  MOVE 4EFA 4EFB -> 4EFA\n"), std::string::npos);
    EXPECT_NE(r.out.find("  MOVE 4EFA 4EFB -> 4EFC\n"), std::string::npos);
    EXPECT_NE(r.out.find("GET 03A6 4EFA root=4EFB hops=5 value=payload"), std::string::npos);
    EXPECT_NE(r.out.find("GET 03A6 4EFA root=4EFC"), std::string::npos);
}

TEST(Churn, EmptyScriptIsANoOp) {
    ChurnOptions opt{temp_file("gdht_empty_churn.txt", "# nothing\n"), false};
    const Outcome r = run([&](auto& o, auto& e) { return cmd_churn(scenario(Algorithm::Chord), opt, o, e); });
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "END version=0 nodes=18 pairs=0\n");
}

TEST(Churn, BadCommandsAreUsageErrors) {
    for (const char* text : {"LEAVE FFFF\n", "JOIN 03A6\n", "FLY 03A6\n", "GET FFFF 4EFA\n"}) {
        ChurnOptions opt{temp_file("gdht_bad_churn.txt", text), false};
        const Outcome r = run([&](auto& o, auto& e) { return cmd_churn(scenario(Algorithm::Chord), opt, o, e); });
        EXPECT_EQ(r.code, kExitUsage) << text;
        EXPECT_NE(r.err.find("line 1"), std::string::npos) << r.err;
    }
}

TEST(Stats, TwoBudgetsOnARandomOverlay) {
    Scenario s = scenario(Algorithm::Tapestry);
    s.random_nodes = 100;
    StatsOptions opt;
    opt.budgets = "2,15";
    const Outcome r = run([&](auto& o, auto& e) { return cmd_stats(s, opt, o, e); });
    EXPECT_EQ(r.code, 0);
    const auto l = lines(r.out);
    ASSERT_EQ(l.size(), 3u);
    EXPECT_EQ(l[1].rfind("tapestry,100,2,", 0), 0u);
    EXPECT_EQ(l[2].rfind("tapestry,100,15,", 0), 0u);
    for (int i = 1; i <= 2; ++i) EXPECT_NE(l[i].find(",1000,0,"), std::string::npos) << l[i];
}

TEST(Stats, BudgetBelowTwoIsAConfigError) {
    StatsOptions opt;
    opt.budgets = "1";
    const Outcome r = run([&](auto& o, auto& e) { return cmd_stats(scenario(Algorithm::Tapestry), opt, o, e); });
    EXPECT_EQ(r.code, kExitUsage);
}

TEST(Stats, ZeroLookupsIsHeaderOnly) {
    StatsOptions opt;
    opt.budgets = "2,4";
    opt.lookups = 0;
    const Outcome r = run([&](auto& o, auto& e) { return cmd_stats(scenario(Algorithm::Pastry), opt, o, e); });
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, convergence_csv_header() + "\n");
}

TEST(Stats, OutputIsDeterministic) {
    Scenario s = scenario(Algorithm::Pastry);
    s.random_nodes = 60;
    s.seed = 7;
    StatsOptions opt;
    opt.budgets = "2,3,full";
    opt.lookups = 500;
    const Outcome a = run([&](auto& o, auto& e) { return cmd_stats(s, opt, o, e); });
    const Outcome b = run([&](auto& o, auto& e) { return cmd_stats(s, opt, o, e); });
    EXPECT_EQ(a.out, b.out);
}

TEST(Scenario, ParameterChecks) {
    Scenario s = scenario(Algorithm::Kademlia);
    s.d = 4;
    EXPECT_THROW(s.params(), ConfigError);
    s = scenario(Algorithm::Tapestry);
    s.d = 2;
    s.k = 8;
    EXPECT_EQ(s.params().width(), 16u);
    EXPECT_EQ(s.params().radix(), 4u);
    s = scenario(Algorithm::Chord);
    s.m = 3;
    EXPECT_THROW(s.params(), ConfigError);
    s = scenario(Algorithm::Tapestry);
    s.k = 8;
    EXPECT_THROW(s.nodes(s.params()), ConfigError);
    s = scenario(Algorithm::Chord);
    s.budget_spec = "all=4";
    EXPECT_THROW(s.budgets(s.params()), ConfigError);
}

TEST(Scenario, BudgetSpec) {
    const auto p = MetricParams::for_algorithm(Algorithm::Tapestry, 16);
    const BudgetPlan plan = parse_budget_spec("all=4, 03A6=2", p);
    EXPECT_EQ(plan.all, 4u);
    EXPECT_EQ(plan.per_node.at(parse_id("03A6", p)), 2u);
    EXPECT_THROW(parse_budget_spec("all=16", p), ConfigError);
    EXPECT_THROW(parse_budget_spec("all=x", p), ConfigError);
    EXPECT_THROW(parse_budget_spec("03A6", p), ConfigError);
}

TEST(Scenario, NodeListSkipsCommentsAndReportsLines) {
    const auto p = MetricParams::for_algorithm(Algorithm::Tapestry, 16);
    EXPECT_EQ(parse_node_list("# a\n03A6  # b\n\n4EFA\n", p).size(), 2u);
    try {
        parse_node_list("03A6\n4EF\n", p);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.position(), 2u);
    }
}

TEST(Hash, TruncatesSha1ToTheIdentifierWidth) {
    const Outcome r = run([](auto& o, auto& e) { return cmd_hash(scenario(Algorithm::Kademlia), "hello", o, e); });
    // SHA-1("hello") = aaf4c61d...
    EXPECT_EQ(r.out, "AAF4\n");
}

// The data directory and the embedded copies must not drift apart.
TEST(ExampleData, FilesMatchEmbeddedTables) {
    const auto p16 = [](Algorithm a) { return MetricParams::for_algorithm(a, 16); };
    const std::vector<std::pair<Algorithm, const std::vector<TableFixture>*>> sets = {
        {Algorithm::Tapestry, &kTapestryTables},
        {Algorithm::Chord, &kChordTables},
        {Algorithm::Kademlia, &kKademliaTables},
        {Algorithm::Pastry, &kPastryTables},
    };
    for (const auto& [a, tables] : sets) {
        const auto p = p16(a);
        const auto loaded = load_fixture_dir(kData / std::string(to_string(a)), a, p);
        ASSERT_EQ(loaded.size(), tables->size()) << to_string(a);
        for (const auto& t : *tables) {
            const Identifier owner = parse_id(t.owner, p);
            EXPECT_EQ(loaded.at(owner), parse_fixture(t.text, a, owner, p)) << t.owner;
        }
    }
    const auto p = p16(Algorithm::Tapestry);
    std::ifstream in(kData / "nodes.txt");
    std::stringstream buf;
    buf << in.rdbuf();
    EXPECT_EQ(parse_node_list(buf.str(), p), example_nodes(p));
}
