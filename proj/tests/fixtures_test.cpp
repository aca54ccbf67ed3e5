#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "gdht/fixtures.hpp"
#include "gdht/random.hpp"
#include "support/fixtures.hpp"

using namespace gdht;
using testdata::id;

TEST(Fixture, RoundTripsBuiltStates) {
    for (Algorithm a : testdata::kAlgorithms) {
        const auto p = testdata::params_for(a);
        const auto nodes = random_population(40, p, 9);
        const NodeRing ring(nodes);
        for (const auto& n : nodes) {
            const RoutingState s = build_state(a, n, ring, p);
            EXPECT_EQ(parse_fixture(render_fixture(s, p), a, n, p), s) << to_string(a);
        }
    }
}

TEST(Fixture, CommentsAndBlankLinesAreSkipped) {
    const auto p = testdata::kademlia16();
    const auto s = parse_fixture("# bucket list\n\nbucket 2 456B   # nearest\n", Algorithm::Kademlia, id("03A6", p), p);
    EXPECT_EQ(std::get<KademliaTable>(s).buckets[1], id("456B", p));
}

TEST(Fixture, ErrorsNameTheLine) {
    const auto p = testdata::tapestry16();
    const Identifier owner = id("03A6", p);
    const auto line_of = [&](std::string_view text, Algorithm a) -> std::size_t {
        try {
            parse_fixture(text, a, owner, testdata::params_for(a));
        } catch (const FixtureError& e) {
            return e.line();
        }
        return 0;
    };
    EXPECT_EQ(line_of("column 1 2 25AB\ncolumn 9 2 25AB\n", Algorithm::Tapestry), 2u);
    EXPECT_EQ(line_of("column 1 G 25AB\n", Algorithm::Tapestry), 1u);
    EXPECT_EQ(line_of("column 1 2 25A\n", Algorithm::Tapestry), 1u);
    EXPECT_EQ(line_of("column 1 2 25AB extra\n", Algorithm::Tapestry), 1u);
    EXPECT_EQ(line_of("column 1 2 25AB\ncolumn 1 2 2000\n", Algorithm::Tapestry), 2u);
    EXPECT_EQ(line_of("finger 0 03A9\n", Algorithm::Tapestry), 1u);
    EXPECT_EQ(line_of("bucket 17 03A9\n", Algorithm::Kademlia), 1u);
    EXPECT_EQ(line_of("leafset X 03A9\n", Algorithm::Pastry), 1u);
}

TEST(Fixture, ChordNeedsEveryFinger) {
    const auto p = testdata::chord16();
    EXPECT_THROW(parse_fixture("finger 0 03A9\nleafset P 0379\nleafset S 03A9\n", Algorithm::Chord, id("03A6", p), p),
                 FixtureError);
}

TEST(Fixture, LoadsDirectoryKeyedByFileName) {
    const auto p = testdata::tapestry16();
    const auto tables = load_fixture_dir(std::filesystem::path(GDHT_DATA_DIR) / "worked" / "tapestry", Algorithm::Tapestry, p);
    ASSERT_EQ(tables.size(), 4u);
    EXPECT_TRUE(tables.contains(id("4EAB", p)));
    const auto& t = std::get<TapestryTable>(tables.at(id("4EFC", p)));
    EXPECT_EQ(t.matrix.at(0, 0), id("03A9", p));
}

TEST(Fixture, DirectoryRejectsBadFileNames) {
    const auto dir = std::filesystem::temp_directory_path() / "gdht_fixture_names";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "notanid.txt") << "column 1 2 25AB\n";
    EXPECT_THROW(load_fixture_dir(dir, Algorithm::Tapestry, testdata::tapestry16()), FixtureError);
    std::filesystem::remove_all(dir);
}
