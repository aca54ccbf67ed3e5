#include <gtest/gtest.h>

#include "gdht/overlay.hpp"
#include "gdht/random.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace gdht;
using testdata::id;

namespace {

Overlay worked(Algorithm a) {
    const auto p = testdata::params_for(a);
    return Overlay(testdata::nodes(p), p, a);
}

std::vector<Identifier> members(const Overlay& o) {
    return {o.ring().nodes().begin(), o.ring().nodes().end()};
}

// key -> root under the independent oracle.
std::map<Identifier, Identifier> oracle_placement(const Overlay& o, const std::vector<Identifier>& keys) {
    std::map<Identifier, Identifier> out;
    for (const auto& k : keys) out[k] = oracle::root(k, members(o), o.params());
    return out;
}

}  // namespace

TEST(Overlay, RejectsEmptyAndDuplicateMembership) {
    const auto p = testdata::chord16();
    EXPECT_THROW(Overlay({}, p, Algorithm::Chord), std::invalid_argument);
    EXPECT_THROW(Overlay({id("03A6", p), id("03A6", p)}, p, Algorithm::Chord), std::invalid_argument);
}

TEST(Overlay, ChordStateOf03A6IsTheWorkedTable) {
    const Overlay o = worked(Algorithm::Chord);
    const auto& s = std::get<ChordState>(o.snapshot().state_of(id("03A6", o.params())));
    EXPECT_EQ(render_id(s.fingers[7], o.params()), "456B");
    EXPECT_EQ(render_id(s.predecessor, o.params()), "0379");
    EXPECT_TRUE(o.audit_placement().empty());
    EXPECT_EQ(o.version(), 0u);
}

TEST(Overlay, PutAndGetFollowTheWorkedRoute) {
    for (Algorithm a : testdata::kAlgorithms) {
        Overlay o = worked(a);
        const auto& p = o.params();
        const Placement placed = o.put(id("4EFA", p), "v", id("03A6", p));
        EXPECT_EQ(render_id(placed.root, p), "4EFB");
        ASSERT_TRUE(placed.route);
        EXPECT_EQ(placed.route->root(), placed.root);
        const GetResult r = o.get(id("03A6", p), id("4EFA", p));
        EXPECT_EQ(r.value, std::optional<std::string>("v")) << to_string(a);
        EXPECT_EQ(r.trace.path(), placed.route->path());
    }
}

TEST(Overlay, GetOfMissingKeyIsEmpty) {
    Overlay o = worked(Algorithm::Kademlia);
    const auto r = o.get(id("03A6", o.params()), id("1234", o.params()));
    EXPECT_FALSE(r.value);
    EXPECT_EQ(r.trace.root(), root_of_oracle(id("1234", o.params()), members(o), o.params()));
}

TEST(Overlay, PutOverwrites) {
    Overlay o = worked(Algorithm::Pastry);
    const auto& p = o.params();
    o.put(id("4EFA", p), "one");
    o.put(id("4EFA", p), "two");
    EXPECT_EQ(o.stored_pairs(), 1u);
    EXPECT_EQ(o.get(id("25AB", p), id("4EFA", p)).value, std::optional<std::string>("two"));
}

TEST(Overlay, JoinTakesOverTheKeysItNowRoots) {
    for (Algorithm a : testdata::kAlgorithms) {
        Overlay o = worked(a);
        const auto& p = o.params();
        o.put(id("4EFA", p), "v");
        o.put(id("1234", p), "w");
        const ChurnEvent e = o.join(id("4EFA", p));
        EXPECT_EQ(e.keys_moved, 1u) << to_string(a);
        ASSERT_EQ(e.moves.size(), 1u);
        EXPECT_EQ(e.moves[0].key, id("4EFA", p));
        EXPECT_EQ(e.moves[0].from, id("4EFB", p));
        EXPECT_EQ(e.moves[0].to, id("4EFA", p));
        EXPECT_EQ(e.version, 1u);
        EXPECT_FALSE(e.affected_nodes.empty());
        EXPECT_TRUE(o.audit_placement().empty());
        EXPECT_TRUE(o.validate().empty());
        EXPECT_EQ(o.store_of(id("4EFA", p)).at(id("4EFA", p)), "v");
    }
}

TEST(Overlay, JoinThatRootsNothingMovesNothing) {
    Overlay o = worked(Algorithm::Tapestry);
    const auto& p = o.params();
    o.put(id("4EFA", p), "v");
    EXPECT_EQ(o.join(id("9000", p)).keys_moved, 0u);
}

TEST(Overlay, JoinIntoSingletonLinksBothNodes) {
    const auto p = testdata::pastry16();
    Overlay o({id("03A6", p)}, p, Algorithm::Pastry);
    o.join(id("4EFA", p));
    const auto& s = std::get<PastryState>(o.snapshot().state_of(id("03A6", p)));
    EXPECT_EQ(s.leaf_successors, std::vector<Identifier>{id("4EFA", p)});
    EXPECT_EQ(s.leaf_predecessors, std::vector<Identifier>{id("4EFA", p)});
}

TEST(Overlay, LeaveHandsKeysToTheNextRoot) {
    for (Algorithm a : testdata::kAlgorithms) {
        Overlay o = worked(a);
        const auto& p = o.params();
        o.put(id("4EFA", p), "v");
        const ChurnEvent e = o.leave(id("4EFB", p));
        ASSERT_EQ(e.moves.size(), 1u) << to_string(a);
        EXPECT_EQ(render_id(e.moves[0].to, p), "4EFC") << to_string(a);
        EXPECT_TRUE(o.audit_placement().empty());
    }
}

TEST(Overlay, LeaveErrors) {
    Overlay o = worked(Algorithm::Chord);
    const auto& p = o.params();
    EXPECT_THROW(o.leave(id("FFFF", p)), std::invalid_argument);
    EXPECT_EQ(o.leave(id("0156", p)).keys_moved, 0u);
    Overlay single({id("03A6", p)}, p, Algorithm::Chord);
    EXPECT_THROW(single.leave(id("03A6", p)), std::invalid_argument);
    EXPECT_THROW(o.join(id("03A6", p)), std::invalid_argument);
}

TEST(Overlay, AuditReportsAMisplacedPair) {
    Overlay o = worked(Algorithm::Kademlia);
    const auto& p = o.params();
    o.put(id("4EFA", p), "v");
    o.misplace(id("4EFA", p), id("0156", p));
    const auto v = o.audit_placement();
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].key, id("4EFA", p));
    EXPECT_EQ(v[0].holder, id("0156", p));
    EXPECT_EQ(v[0].oracle_root, id("4EFB", p));
}

// Replays seeded scripts and checks every settle point against the oracle.
TEST(Overlay, RandomChurnKeepsPlacementExact) {
    for (Algorithm a : testdata::kAlgorithms) {
        const auto p = testdata::params_for(a);
        for (std::uint64_t seed = 1; seed <= 6; ++seed) {
            const auto initial = random_population(20, p, seed);
            Overlay o(initial, p, a);
            std::set<Identifier> keys;
            for (const auto& c : random_churn_script(initial, 100, p, seed)) {
                switch (c.op) {
                case ChurnCommand::Op::Join:
                case ChurnCommand::Op::Leave: {
                    const auto before = oracle_placement(o, {keys.begin(), keys.end()});
                    const std::size_t stored = o.stored_pairs();
                    const ChurnEvent e = c.op == ChurnCommand::Op::Join ? o.join(c.node) : o.leave(c.node);
                    const auto after = oracle_placement(o, {keys.begin(), keys.end()});
                    std::vector<KeyMove> expected;
                    for (const auto& [k, r] : after) {
                        if (before.at(k) != r) expected.push_back({k, before.at(k), r});
                    }
                    ASSERT_EQ(e.moves, expected);
                    ASSERT_EQ(e.keys_moved, expected.size());
                    ASSERT_EQ(o.stored_pairs(), stored);
                    ASSERT_TRUE(o.audit_placement().empty());
                    ASSERT_TRUE(o.validate().empty());
                    break;
                }
                case ChurnCommand::Op::Put:
                    o.put(c.key, c.value);
                    keys.insert(c.key);
                    break;
                case ChurnCommand::Op::Get: {
                    const auto r = o.get(c.node, c.key);
                    ASSERT_EQ(r.trace.root(), oracle::root(c.key, members(o), p));
                    ASSERT_EQ(r.value.has_value(), keys.contains(c.key));
                    break;
                }
                case ChurnCommand::Op::Audit: ASSERT_TRUE(o.audit_placement().empty()); break;
                }
            }
        }
    }
}

TEST(Overlay, EverySourceReadsThePutValue) {
    for (Algorithm a : testdata::kAlgorithms) {
        Overlay o = worked(a);
        const auto& p = o.params();
        std::mt19937_64 rng(3);
        std::map<Identifier, std::string> latest;
        for (int i = 0; i < 40; ++i) {
            const Identifier key = random_identifier(rng, p);
            latest[key] = "v" + std::to_string(i);
            o.put(key, latest[key]);
        }
        for (const auto& src : members(o)) {
            for (const auto& [key, value] : latest) ASSERT_EQ(o.get(src, key).value, std::optional<std::string>(value));
        }
    }
}

// ---------------------------------------------------------------------------
// Churn scripts

TEST(ChurnScript, ParsesEveryCommand) {
    const auto p = testdata::tapestry16();
    const auto cmds = parse_churn_script("# setup\nJOIN 4EFA\nPUT 4EFA hello world  \n\nGET 03A6 4EFA\nLEAVE 4EFB\nAUDIT\n", p);
    ASSERT_EQ(cmds.size(), 5u);
    EXPECT_EQ(cmds[0].op, ChurnCommand::Op::Join);
    EXPECT_EQ(cmds[1].value, "hello world");
    EXPECT_EQ(cmds[1].line, 3u);
    EXPECT_EQ(cmds[2].node, id("03A6", p));
    EXPECT_EQ(cmds[3].op, ChurnCommand::Op::Leave);
    EXPECT_EQ(cmds[4].op, ChurnCommand::Op::Audit);
    EXPECT_TRUE(parse_churn_script("", p).empty());
}

TEST(ChurnScript, ErrorsCarryTheLine) {
    const auto p = testdata::tapestry16();
    const auto line_of = [&](std::string_view text) -> std::size_t {
        try {
            parse_churn_script(text, p);
        } catch (const ParseError& e) {
            return e.position();
        }
        return 0;
    };
    EXPECT_EQ(line_of("JOIN 4EFA\nJUMP 4EFA\n"), 2u);
    EXPECT_EQ(line_of("JOIN 4EF\n"), 1u);
    EXPECT_EQ(line_of("AUDIT\nPUT 4EFA\n"), 2u);
    EXPECT_EQ(line_of("GET 03A6\n"), 1u);
    EXPECT_EQ(line_of("LEAVE 03A6 03A6\n"), 1u);
}

TEST(ChurnScript, RenderRoundTrips) {
    const auto p = testdata::kademlia16();
    const auto script = random_churn_script(testdata::nodes(p), 200, p, 4);
    const auto again = parse_churn_script(render_churn_script(script, p), p);
    ASSERT_EQ(again.size(), script.size());
    for (std::size_t i = 0; i < script.size(); ++i) {
        EXPECT_EQ(again[i].op, script[i].op);
        EXPECT_EQ(again[i].node, script[i].node);
        EXPECT_EQ(again[i].key, script[i].key);
        EXPECT_EQ(again[i].value, script[i].value);
    }
}

TEST(ChurnScript, RandomScriptsAreSeedDeterministic) {
    const auto p = testdata::chord16();
    const auto a = render_churn_script(random_churn_script(testdata::nodes(p), 100, p, 9), p);
    const auto b = render_churn_script(random_churn_script(testdata::nodes(p), 100, p, 9), p);
    const auto c = render_churn_script(random_churn_script(testdata::nodes(p), 100, p, 10), p);
    EXPECT_EQ(a, b);
    EXPECT_NE(a, c);
}
