#include "gdht/fixtures.hpp"

#include <fstream>
#include <sstream>

#include <fmt/format.h>

namespace gdht {

namespace {

unsigned parse_index(const std::string& token, int base, std::size_t line) {
    try {
        std::size_t used = 0;
        const unsigned long v = std::stoul(token, &used, base);
        if (used != token.size()) throw std::invalid_argument(token);
        return static_cast<unsigned>(v);
    } catch (const std::exception&) {
        throw FixtureError("bad index '" + token + "'", line);
    }
}

Identifier parse_entry(const std::string& token, const MetricParams& params, std::size_t line) {
    try {
        return parse_id(token, params);
    } catch (const ParseError& e) {
        throw FixtureError(e.what(), line);
    }
}

}  // namespace

RoutingState parse_fixture(std::string_view text, Algorithm algorithm, const Identifier& owner,
                           const MetricParams& params) {
    PrefixMatrix matrix;
    if (algorithm == Algorithm::Tapestry || algorithm == Algorithm::Pastry) {
        if (params.digit_bits() > 16) throw FixtureError("digit size too large for a prefix table", 0);
        matrix = PrefixMatrix(owner, params.digits(), params.radix());
    }
    KademliaTable kad{owner, std::vector<std::optional<Identifier>>(params.width())};
    std::vector<std::optional<Identifier>> fingers;
    std::vector<Identifier> successors;
    std::vector<Identifier> predecessors;

    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream fields(raw);
        std::vector<std::string> tok;
        for (std::string t; fields >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        const std::string& kind = tok[0];
        const auto expect = [&](std::size_t n, const char* usage) {
            if (tok.size() != n) throw FixtureError(std::string("expected: ") + usage, line_no);
        };

        if (kind == "leafset" && (algorithm == Algorithm::Chord || algorithm == Algorithm::Pastry)) {
            expect(3, "leafset P|S <entry>");
            const Identifier e = parse_entry(tok[2], params, line_no);
            if (tok[1] == "P") {
                predecessors.push_back(e);
            } else if (tok[1] == "S") {
                successors.push_back(e);
            } else {
                throw FixtureError("leafset side must be P or S", line_no);
            }
        } else if (kind == "column" &&
                   (algorithm == Algorithm::Tapestry || algorithm == Algorithm::Pastry)) {
            expect(4, "column <n> <digit> <entry>");
            const unsigned column = parse_index(tok[1], 10, line_no);
            const unsigned d = parse_index(tok[2], 16, line_no);
            if (column < 1 || column > matrix.columns() || d >= matrix.radix()) {
                throw FixtureError("cell out of range", line_no);
            }
            if (matrix.at(column - 1, d)) throw FixtureError("cell given twice", line_no);
            matrix.at(column - 1, d) = parse_entry(tok[3], params, line_no);
        } else if (kind == "finger" && algorithm == Algorithm::Chord) {
            expect(3, "finger <i> <entry>");
            const unsigned i = parse_index(tok[1], 10, line_no);
            if (i >= params.finger_count()) throw FixtureError("finger index out of range", line_no);
            if (fingers.size() <= i) fingers.resize(i + 1);
            if (fingers[i]) throw FixtureError("finger given twice", line_no);
            fingers[i] = parse_entry(tok[2], params, line_no);
        } else if (kind == "bucket" && algorithm == Algorithm::Kademlia) {
            expect(3, "bucket <i> <entry>");
            const unsigned i = parse_index(tok[1], 10, line_no);
            if (i < 1 || i > params.width()) throw FixtureError("bucket index out of range", line_no);
            if (kad.buckets[i - 1]) throw FixtureError("bucket given twice", line_no);
            kad.buckets[i - 1] = parse_entry(tok[2], params, line_no);
        } else {
            throw FixtureError("unexpected '" + kind + "' line for " + std::string(to_string(algorithm)),
                               line_no);
        }
    }

    switch (algorithm) {
    case Algorithm::Tapestry: return TapestryTable{std::move(matrix)};
    case Algorithm::Pastry:
        return PastryState{std::move(matrix), std::move(successors), std::move(predecessors)};
    case Algorithm::Kademlia: return kad;
    case Algorithm::Chord: {
        ChordState s;
        s.owner = owner;
        fingers.resize(params.finger_count());
        for (std::size_t i = 0; i < fingers.size(); ++i) {
            if (!fingers[i]) throw FixtureError(fmt::format("finger {} missing", i), 0);
            s.fingers.push_back(*fingers[i]);
        }
        if (predecessors.size() != 1 || successors.size() != 1) {
            throw FixtureError("chord leafset needs exactly one P and one S line", 0);
        }
        s.predecessor = predecessors.front();
        s.successor = successors.front();
        return s;
    }
    }
    throw FixtureError("unknown algorithm", 0);
}

std::string render_fixture(const RoutingState& state, const MetricParams& params) {
    std::string out;
    const auto id = [&](const Identifier& x) { return render_id(x, params); };
    const auto matrix_lines = [&](const PrefixMatrix& m) {
        for (unsigned c = 0; c < m.columns(); ++c) {
            for (unsigned j = 0; j < m.radix(); ++j) {
                if (const auto& cell = m.at(c, j)) out += fmt::format("column {} {:X} {}\n", c + 1, j, id(*cell));
            }
        }
    };
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ChordState>) {
                for (std::size_t i = 0; i < s.fingers.size(); ++i) {
                    out += fmt::format("finger {} {}\n", i, id(s.fingers[i]));
                }
                out += fmt::format("leafset P {}\nleafset S {}\n", id(s.predecessor), id(s.successor));
            } else if constexpr (std::is_same_v<T, PastryState>) {
                matrix_lines(s.matrix);
                for (const auto& p : s.leaf_predecessors) out += fmt::format("leafset P {}\n", id(p));
                for (const auto& n : s.leaf_successors) out += fmt::format("leafset S {}\n", id(n));
            } else if constexpr (std::is_same_v<T, TapestryTable>) {
                matrix_lines(s.matrix);
            } else {
                for (std::size_t i = 0; i < s.buckets.size(); ++i) {
                    if (s.buckets[i]) out += fmt::format("bucket {} {}\n", i + 1, id(*s.buckets[i]));
                }
            }
        },
        state);
    return out;
}

std::map<Identifier, RoutingState> load_fixture_dir(const std::filesystem::path& dir,
                                                    Algorithm algorithm, const MetricParams& params) {
    if (!std::filesystem::is_directory(dir)) {
        throw FixtureError("fixture directory '" + dir.string() + "' does not exist", 0);
    }
    std::map<Identifier, RoutingState> out;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".txt") continue;
        const std::string stem = entry.path().stem().string();
        Identifier owner;
        try {
            owner = parse_id(stem, params);
        } catch (const ParseError& e) {
            throw FixtureError(entry.path().filename().string() + ": file name is not a node id (" + e.what() + ")", 0);
        }
        std::ifstream in(entry.path());
        std::stringstream buf;
        buf << in.rdbuf();
        try {
            out.emplace(owner, parse_fixture(buf.str(), algorithm, owner, params));
        } catch (const FixtureError& e) {
            throw FixtureError(entry.path().filename().string() + ": " + e.what(), 0);
        }
    }
    return out;
}

}  // namespace gdht
