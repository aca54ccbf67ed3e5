#include "worked_example.hpp"

namespace gdht::harness {

const std::vector<TableFixture> kTapestryTables = {
    {"03A6",
     "column 1 2 25AB\n"
     "column 1 4 456B\n"
     "column 1 6 6754\n"
     "column 2 1 0156\n"
     "column 2 4 04A5\n"
     "column 3 5 0359\n"
     "column 3 7 0379\n"
     "column 4 9 03A9\n"
     "column 4 F 03AF\n"},
    {"456B",
     "column 1 0 03A6\n"
     "column 1 2 25AB\n"
     "column 1 6 6754\n"
     "column 2 A 4ABC\n"
     "column 2 E 4EAB\n"},
    {"4EAB",
     "column 1 0 0359\n"
     "column 1 2 25AB\n"
     "column 1 6 6754\n"
     "column 2 5 456B\n"
     "column 2 A 4ABC\n"
     "column 3 5 4E56\n"
     "column 3 C 4ECD\n"
     "column 3 F 4EFC\n"},
    {"4EFC",
     "column 1 0 03A9\n"
     "column 1 2 25AB\n"
     "column 1 6 6754\n"
     "column 2 5 456B\n"
     "column 2 A 4ABC\n"
     "column 3 5 4E56\n"
     "column 3 A 4EAB\n"
     "column 3 C 4ECD\n"
     "column 4 7 4EF7\n"
     "column 4 B 4EFB\n"
     "column 4 D 4EFD\n"},
};

const std::vector<TableFixture> kChordTables = {
    {"03A6",
     "finger 0 03A9\nfinger 1 03AF\nfinger 2 04A5\nfinger 3 04A5\n"
     "finger 4 25AB\nfinger 5 25AB\nfinger 6 25AB\nfinger 7 456B\n"
     "leafset P 0379\nleafset S 03A9\n"},
    {"456B",
     "finger 0 4ABC\nfinger 1 4ABC\nfinger 2 4ABC\nfinger 3 4ABC\n"
     "finger 4 4ABC\nfinger 5 4ABC\nfinger 6 6754\nfinger 7 0156\n"
     "leafset P 25AB\nleafset S 4ABC\n"},
    {"4ABC",
     "finger 0 4E56\nfinger 1 4E56\nfinger 2 4E56\nfinger 3 4E56\n"
     "finger 4 4E56\nfinger 5 4ECD\nfinger 6 6754\nfinger 7 0156\n"
     "leafset P 456B\nleafset S 4E56\n"},
    {"4ECD",
     "finger 0 4EF7\nfinger 1 4EF7\nfinger 2 4EF7\nfinger 3 6754\n"
     "finger 4 6754\nfinger 5 6754\nfinger 6 6754\nfinger 7 0156\n"
     "leafset P 4EAB\nleafset S 4EF7\n"},
};

const std::vector<TableFixture> kKademliaTables = {
    {"03A6",
     "bucket 2 456B\nbucket 3 25AB\nbucket 6 04A5\nbucket 7 0156\n"
     "bucket 9 0379\nbucket 13 03AF\n"},
    {"456B", "bucket 2 04A5\nbucket 3 6754\nbucket 5 4E56\n"},
    {"4E56", "bucket 2 04A5\nbucket 3 6754\nbucket 5 456B\nbucket 6 4ABC\nbucket 9 4ECD\n"},
    {"4ECD",
     "bucket 2 04A5\nbucket 3 6754\nbucket 5 456B\nbucket 6 4ABC\n"
     "bucket 9 4E56\nbucket 10 4EAB\nbucket 11 4EFD\n"},
    {"4EFD",
     "bucket 2 04A5\nbucket 3 6754\nbucket 5 456B\nbucket 6 4ABC\n"
     "bucket 9 4E56\nbucket 10 4EAB\nbucket 11 4ECD\nbucket 13 4EF7\n"
     "bucket 14 4EFB\nbucket 16 4EFC\n"},
};

const std::vector<TableFixture> kPastryTables = {
    {"03A6",
     "column 1 0 03A6\ncolumn 1 2 25AB\ncolumn 1 4 456B\ncolumn 1 6 6754\n"
     "column 2 1 0156\ncolumn 2 3 03A6\ncolumn 2 4 04A5\n"
     "column 3 5 0359\ncolumn 3 7 0379\ncolumn 3 A 03A6\n"
     "column 4 6 03A6\ncolumn 4 9 03A9\ncolumn 4 F 03AF\n"
     "leafset P 0379\nleafset P 0359\n"
     "leafset S 03A9\nleafset S 03AF\n"},
};

const std::vector<ExpectedTrace> kExpectedTraces = {
    {Algorithm::Chord, {"03A6", "456B", "4ABC", "4ECD", "4EF7", "4EFB"}, "456B", "4EFB"},
    {Algorithm::Kademlia, {"03A6", "456B", "4E56", "4ECD", "4EFD", "4EFB"}, "456B", "4EFB"},
    {Algorithm::Tapestry, {"03A6", "456B", "4EAB", "4EFC", "4EFB"}, "456B", "4EFB"},
    {Algorithm::Pastry, {}, "456B", "4EFB"},
};

std::vector<Identifier> example_nodes(const MetricParams& params) {
    std::vector<Identifier> out;
    for (std::string_view s : kExampleNodes) out.push_back(parse_id(s, params));
    return out;
}

}  // namespace gdht::harness
