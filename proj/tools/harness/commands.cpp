#include "commands.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <openssl/sha.h>

#include "gdht/fixtures.hpp"
#include "gdht/metric.hpp"
#include "worked_example.hpp"

namespace gdht::harness {

namespace {

Identifier member_id(std::string_view text, const RoutingSnapshot& snapshot, std::string_view role) {
    Identifier id;
    try {
        id = parse_id(text, snapshot.params());
    } catch (const ParseError& e) {
        throw ConfigError(fmt::format("{} '{}': {}", role, text, e.what()));
    }
    if (!snapshot.contains(id)) throw ConfigError(fmt::format("{} {} is not in the scenario", role, text));
    return id;
}

RoutingSnapshot build_snapshot(const Scenario& scenario, const MetricParams& params) {
    return RoutingSnapshot::build(scenario.algorithm, params, NodeRing(scenario.nodes(params)),
                                  scenario.options(params));
}

void write_csv(const std::optional<std::filesystem::path>& path, const std::string& text) {
    if (!path) return;
    std::ofstream f(*path, std::ios::binary);
    if (!f) throw ConfigError(fmt::format("cannot write {}", path->string()));
    f << text;
}

std::string cell(const std::optional<Identifier>& id, const MetricParams& params) {
    return id ? render_id(*id, params) : std::string("-");
}

std::string render_matrix(const PrefixMatrix& m, const MetricParams& params) {
    const std::size_t width = std::max<std::size_t>(params.hex_digits(), 3) + 2;
    std::string out = fmt::format("{:<7}", "digit");
    for (unsigned c = 0; c < m.columns(); ++c) out += fmt::format("{:<{}}", fmt::format("L{}", c + 1), width);
    while (out.back() == ' ') out.pop_back();
    out += '\n';
    for (unsigned j = 0; j < m.radix(); ++j) {
        out += fmt::format("{:<7X}", j);
        for (unsigned c = 0; c < m.columns(); ++c) out += fmt::format("{:<{}}", cell(m.at(c, j), params), width);
        while (!out.empty() && out.back() == ' ') out.pop_back();
        out += '\n';
    }
    return out;
}

std::string join_ids(const std::vector<Identifier>& ids, const MetricParams& params) {
    std::string out;
    for (const auto& id : ids) out += (out.empty() ? "" : " ") + render_id(id, params);
    return out.empty() ? "-" : out;
}

void print_violations(const std::map<Identifier, ValidationReport>& bad, const MetricParams& params,
                      std::ostream& err) {
    for (const auto& [node, report] : bad) {
        for (const auto& v : report.violations) {
            err << fmt::format("invalid table {}: {} {}: {}\n", render_id(node, params), to_string(v.kind),
                               v.where, v.detail);
        }
    }
}

class CheckLog {
public:
    explicit CheckLog(std::ostream& out) : out_(out) {}

    void record(const std::string& name, bool ok, const std::string& detail = {}) {
        ok ? ++passed_ : ++failed_;
        out_ << (ok ? "PASS " : "FAIL ") << name;
        if (!ok && !detail.empty()) out_ << ": " << detail;
        out_ << '\n';
    }
    int passed() const { return passed_; }
    int failed() const { return failed_; }

private:
    std::ostream& out_;
    int passed_ = 0;
    int failed_ = 0;
};

/// Every cell where two fixture renderings disagree, e.g. "bucket 13: got 03A9, expected 03AF".
std::string fixture_diff(const RoutingState& got, const RoutingState& want, const MetricParams& params) {
    if (const auto* g = std::get_if<ChordState>(&got)) {
        const auto& w = std::get<ChordState>(want);
        if (g->fingers.size() != w.fingers.size()) {
            return fmt::format("entry count {} != {}", g->fingers.size(), w.fingers.size());
        }
    }
    const auto cells = [&](const RoutingState& s) {
        std::map<std::string, std::string> out;
        std::istringstream in(render_fixture(s, params));
        std::string line;
        while (std::getline(in, line)) {
            const auto cut = line.rfind(' ');
            auto& slot = out[line.substr(0, cut)];
            slot += (slot.empty() ? "" : " ") + line.substr(cut + 1);
        }
        return out;
    };
    const auto a = cells(got);
    const auto b = cells(want);
    std::set<std::string> keys;
    for (const auto& [k, v] : a) keys.insert(k);
    for (const auto& [k, v] : b) keys.insert(k);
    std::string out;
    for (const auto& k : keys) {
        const auto ia = a.find(k);
        const auto ib = b.find(k);
        const std::string va = ia == a.end() ? "-" : ia->second;
        const std::string vb = ib == b.end() ? "-" : ib->second;
        if (va != vb) out += fmt::format("{}{}: got {}, expected {}", out.empty() ? "" : "; ", k, va, vb);
    }
    return out;
}

std::string path_text(const std::vector<Identifier>& path, const MetricParams& params) {
    std::string out;
    for (const auto& id : path) out += (out.empty() ? "" : "->") + render_id(id, params);
    return out;
}

std::vector<Identifier> ids_of(const std::vector<std::string_view>& hex, const MetricParams& params) {
    std::vector<Identifier> out;
    for (auto h : hex) out.push_back(parse_id(h, params));
    return out;
}

std::map<Identifier, RoutingState> fixtures_of(const std::vector<TableFixture>& tables, Algorithm algorithm,
                                               const MetricParams& params) {
    std::map<Identifier, RoutingState> out;
    for (const auto& t : tables) {
        const Identifier owner = parse_id(t.owner, params);
        out.emplace(owner, parse_fixture(t.text, algorithm, owner, params));
    }
    return out;
}

}  // namespace

std::string render_table(const RoutingState& state, const MetricParams& params) {
    std::string out;
    std::visit(
        [&](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            const std::string owner = render_id(s.self(), params);
            if constexpr (std::is_same_v<T, ChordState>) {
                out += fmt::format("chord {} m={}\n{:<7}node\n", owner, params.chord_stride(), "finger");
                for (std::size_t i = 0; i < s.fingers.size(); ++i) {
                    out += fmt::format("{:<7}{}\n", i, render_id(s.fingers[i], params));
                }
                out += fmt::format("{:<7}{}\n{:<7}{}\n", "P", render_id(s.predecessor, params), "S",
                                   render_id(s.successor, params));
            } else if constexpr (std::is_same_v<T, KademliaTable>) {
                out += fmt::format("kademlia {}\n{:<7}node\n", owner, "bucket");
                for (std::size_t i = 0; i < s.buckets.size(); ++i) {
                    out += fmt::format("{:<7}{}\n", i + 1, cell(s.buckets[i], params));
                }
            } else if constexpr (std::is_same_v<T, TapestryTable>) {
                out += fmt::format("tapestry {} d={} k={}\n", owner, params.digit_bits(), params.digits());
                out += render_matrix(s.matrix, params);
            } else {
                out += fmt::format("pastry {} d={} k={} leafset={}\n", owner, params.digit_bits(), params.digits(),
                                   params.leafset_size());
                out += render_matrix(s.matrix, params);
                out += fmt::format("leafset P {}\n", join_ids(s.leaf_predecessors, params));
                out += fmt::format("leafset S {}\n", join_ids(s.leaf_successors, params));
            }
        },
        state);
    return out;
}

std::string render_report(const ValidationReport& report) {
    if (report.ok()) return "validation: ok\n";
    std::string out = fmt::format("validation: {} violation(s)\n", report.violations.size());
    for (const auto& v : report.violations) out += fmt::format("  {} {}: {}\n", to_string(v.kind), v.where, v.detail);
    return out;
}

std::string render_trace(const LookupTrace& trace, const MetricParams& params) {
    std::string out;
    for (std::size_t i = 0; i + 1 < trace.hops.size(); ++i) {
        out += fmt::format("{} {} {}\n", i, render_id(trace.hops[i].node, params),
                           render_distance(trace.hops[i].distance, params));
    }
    if (!trace.hops.empty()) out += fmt::format("ROOT {}\n", render_id(trace.root(), params));
    return out;
}

int cmd_tables(const Scenario& scenario, std::string_view node, bool validate, std::ostream& out,
               std::ostream&) {
    const MetricParams params = scenario.params();
    const RoutingSnapshot snapshot = build_snapshot(scenario, params);
    const Identifier self = member_id(node, snapshot, "node");
    const RoutingState& state = snapshot.state_of(self);
    out << render_table(state, params);
    if (!validate) return kExitOk;
    const auto report = validate_table(state, snapshot.ring(), params, scenario.budgets(params).for_node(self));
    out << render_report(report);
    return report.ok() ? kExitOk : kExitVerification;
}

int cmd_lookup(const Scenario& scenario, std::string_view source, std::string_view hash, std::ostream& out,
               std::ostream& err) {
    const MetricParams params = scenario.params();
    const RoutingSnapshot snapshot = build_snapshot(scenario, params);
    const Identifier from = member_id(source, snapshot, "source");
    Identifier target;
    try {
        target = parse_id(hash, params);
    } catch (const ParseError& e) {
        throw ConfigError(fmt::format("hash '{}': {}", hash, e.what()));
    }
    try {
        out << render_trace(lookup(snapshot, from, target), params);
    } catch (const RoutingFailure& f) {
        const auto& hops = f.partial().hops;
        for (std::size_t i = 0; i < hops.size(); ++i) {
            out << fmt::format("{} {} {}\n", i, render_id(hops[i].node, params),
                               render_distance(hops[i].distance, params));
        }
        err << "routing failure: " << f.what() << '\n';
        return kExitRouting;
    }
    return kExitOk;
}

int cmd_sweep(const Scenario& scenario, const SweepOptions& options, std::ostream& out, std::ostream& err) {
    if (options.exhaustive && options.sample) throw ConfigError("--exhaustive and --sample are exclusive");
    const MetricParams params = scenario.params();
    const RoutingSnapshot snapshot = build_snapshot(scenario, params);
    const BudgetPlan budgets = scenario.budgets(params);

    if (options.validate) {
        std::map<Identifier, ValidationReport> bad;
        for (const Identifier& n : snapshot.ring().nodes()) {
            auto report = validate_table(snapshot.state_of(n), snapshot.ring(), params, budgets.for_node(n));
            if (!report.ok()) bad.emplace(n, std::move(report));
        }
        if (!bad.empty()) {
            print_violations(bad, params, err);
            return kExitVerification;
        }
    }

    HashSelection selection;
    selection.seed = scenario.seed;
    if (options.sample) {
        selection.mode = HashSelection::Mode::SampleHashes;
        selection.count = *options.sample;
    } else if (params.width() > 32) {
        throw ConfigError("exhaustive sweeps need W <= 32; use --sample");
    }
    ConvergenceReport report = verify_convergence(snapshot, selection, {}, options.threads);
    report.budget = budgets.label();

    const std::string csv = convergence_csv_header() + "\n" + convergence_csv_row(report) + "\n";
    out << csv;
    write_csv(options.csv, csv);
    for (const auto& m : report.mismatches) {
        err << fmt::format("mismatch source={} hash={} greedy={} oracle={}{}\n", render_id(m.source, params),
                           render_id(m.target, params), m.greedy_root ? render_id(*m.greedy_root, params) : "-",
                           render_id(m.oracle_root, params), m.failure.empty() ? "" : " (" + m.failure + ")");
    }
    return report.mismatch_count == 0 ? kExitOk : kExitVerification;
}

int cmd_churn(const Scenario& scenario, const ChurnOptions& options, std::ostream& out, std::ostream& err) {
    const MetricParams params = scenario.params();
    const auto commands = parse_churn_script(read_file(options.script), params);
    Overlay overlay(scenario.nodes(params), params, scenario.algorithm, scenario.options(params));

    const auto audit = [&](std::size_t line, bool announce) {
        const auto violations = overlay.audit_placement();
        if (announce || !violations.empty()) {
            out << (violations.empty() ? std::string("AUDIT ok\n")
                                       : fmt::format("AUDIT violations={}\n", violations.size()));
        }
        for (const auto& v : violations) {
            out << fmt::format("  MISPLACED {} at {} root {}\n", render_id(v.key, params), render_id(v.holder, params),
                               render_id(v.oracle_root, params));
        }
        if (!violations.empty()) err << fmt::format("line {}: placement audit failed\n", line);
        return violations.empty();
    };

    for (const auto& c : commands) {
        try {
            switch (c.op) {
            case ChurnCommand::Op::Join:
            case ChurnCommand::Op::Leave: {
                const bool join = c.op == ChurnCommand::Op::Join;
                const ChurnEvent e = join ? overlay.join(c.node) : overlay.leave(c.node);
                out << fmt::format("{} {} version={} keys_moved={} affected={}\n", join ? "JOIN" : "LEAVE",
                                   render_id(c.node, params), e.version, e.keys_moved, e.affected_nodes.size());
                for (const auto& mv : e.moves) {
                    out << fmt::format("  MOVE {} {} -> {}\n", render_id(mv.key, params), render_id(mv.from, params),
                                       render_id(mv.to, params));
                }
                if (options.validate) {
                    if (const auto bad = overlay.validate(); !bad.empty()) {
                        print_violations(bad, params, err);
                        return kExitVerification;
                    }
                }
                if (!audit(c.line, false)) return kExitVerification;
                break;
            }
            case ChurnCommand::Op::Put: {
                const Placement p = overlay.put(c.key, c.value);
                out << fmt::format("PUT {} root={}\n", render_id(c.key, params), render_id(p.root, params));
                break;
            }
            case ChurnCommand::Op::Get: {
                if (!overlay.ring().contains(c.node)) {
                    throw ConfigError(fmt::format("source {} is not a member", render_id(c.node, params)));
                }
                const GetResult r = overlay.get(c.node, c.key);
                out << fmt::format("GET {} {} root={} hops={} value={}\n", render_id(c.node, params),
                                   render_id(c.key, params), render_id(r.trace.root(), params), r.trace.hop_count(),
                                   r.value ? *r.value : std::string("<none>"));
                break;
            }
            case ChurnCommand::Op::Audit:
                if (!audit(c.line, true)) return kExitVerification;
                break;
            }
        } catch (const RoutingFailure&) {
            err << fmt::format("line {}: ", c.line);
            throw;
        } catch (const std::invalid_argument& e) {
            throw ConfigError(fmt::format("line {}: {}", c.line, e.what()));
        } catch (const ConfigError& e) {
            throw ConfigError(fmt::format("line {}: {}", c.line, e.what()));
        }
    }
    out << fmt::format("END version={} nodes={} pairs={}\n", overlay.version(), overlay.ring().size(),
                       overlay.stored_pairs());
    return audit(commands.size(), false) ? kExitOk : kExitVerification;
}

int cmd_stats(const Scenario& scenario, const StatsOptions& options, std::ostream& out, std::ostream& err) {
    if (scenario.algorithm != Algorithm::Tapestry && scenario.algorithm != Algorithm::Pastry) {
        throw ConfigError("stats compares row budgets; use tapestry or pastry");
    }
    const MetricParams params = scenario.params();
    SnapshotOptions base = scenario.options(params);

    std::vector<std::optional<unsigned>> budgets;
    std::string_view rest = options.budgets;
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        const std::string_view item = rest.substr(0, comma);
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (item == "full") {
            budgets.emplace_back();
            continue;
        }
        budgets.emplace_back(parse_budget_spec(fmt::format("all={}", item), params).all);
    }
    if (budgets.empty()) throw ConfigError("--budgets needs at least one value");

    const NodeRing ring(scenario.nodes(params));
    std::string csv = convergence_csv_header() + "\n";
    out << convergence_csv_header() << '\n';
    bool clean = true;
    if (options.lookups > 0) {
        for (const auto& x : budgets) {
            SnapshotOptions o = base;
            o.budgets.all = x;
            const RoutingSnapshot snapshot = RoutingSnapshot::build(scenario.algorithm, params, ring, o);
            HashSelection selection{HashSelection::Mode::RandomLookups, options.lookups, scenario.seed};
            ConvergenceReport report = verify_convergence(snapshot, selection, {}, options.threads);
            report.budget = o.budgets.label();
            const std::string row = convergence_csv_row(report);
            out << row << '\n';
            csv += row + "\n";
            if (report.mismatch_count != 0) {
                clean = false;
                err << fmt::format("budget {}: {} root mismatches\n", report.budget, report.mismatch_count);
            }
        }
    }
    write_csv(options.csv, csv);
    return clean ? kExitOk : kExitVerification;
}

int cmd_worked_examples(const ExampleHooks& hooks, std::ostream& out, std::ostream&) {
    CheckLog log(out);
    const MetricParams chord = MetricParams::for_algorithm(Algorithm::Chord, kExampleWidth, 0, hooks.chord_stride, 2);
    const MetricParams chord_ref = MetricParams::for_algorithm(Algorithm::Chord, kExampleWidth);
    const MetricParams kad = MetricParams::for_algorithm(Algorithm::Kademlia, kExampleWidth);
    const MetricParams tap = MetricParams::for_algorithm(Algorithm::Tapestry, kExampleWidth);
    const MetricParams pas = MetricParams::for_algorithm(Algorithm::Pastry, kExampleWidth);
    const NodeRing ring(example_nodes(tap));
    const Identifier target = parse_id(kExampleTarget, tap);
    const Identifier root = parse_id(kExampleRoot, tap);

    SnapshotOptions kad_options;
    kad_options.policy = hooks.kademlia_policy;
    SnapshotOptions tap_options;
    tap_options.fixtures = fixtures_of(kTapestryTables, Algorithm::Tapestry, tap);

    struct Setup {
        Algorithm algorithm;
        const MetricParams* params;
        SnapshotOptions options;
    };
    const std::vector<Setup> setups = {
        {Algorithm::Chord, &chord, {}},
        {Algorithm::Pastry, &pas, {}},
        {Algorithm::Tapestry, &tap, tap_options},
        {Algorithm::Kademlia, &kad, kad_options},
    };
    std::map<Algorithm, RoutingSnapshot> snapshots;
    for (const auto& s : setups) {
        snapshots.emplace(s.algorithm, RoutingSnapshot::build(s.algorithm, *s.params, ring, s.options));
    }

    const auto compare_tables = [&](std::string_view label, const std::vector<TableFixture>& tables,
                                    Algorithm algorithm, const MetricParams& built_params,
                                    const MetricParams& ref_params, SelectionPolicy policy) {
        for (const auto& t : tables) {
            const Identifier owner = parse_id(t.owner, ref_params);
            const RoutingState want = parse_fixture(t.text, algorithm, owner, ref_params);
            const RoutingState got = build_state(algorithm, owner, ring, built_params, policy);
            log.record(fmt::format("{} table {}", label, t.owner), got == want, fixture_diff(got, want, ref_params));
        }
    };
    compare_tables("chord", kChordTables, Algorithm::Chord, chord, chord_ref, SelectionPolicy::MetricNearest);
    compare_tables("kademlia", kKademliaTables, Algorithm::Kademlia, kad, kad, hooks.kademlia_policy);
    compare_tables("pastry", kPastryTables, Algorithm::Pastry, pas, pas, SelectionPolicy::MetricNearest);
    compare_tables("tapestry", {kTapestryTables.front()}, Algorithm::Tapestry, tap, tap,
                   SelectionPolicy::MetricNearest);

    for (const auto& [owner, state] : tap_options.fixtures) {
        const auto report = validate_table(state, ring, tap);
        log.record(fmt::format("tapestry fixture {} validates", render_id(owner, tap)), report.ok(),
                   report.ok() ? "" : render_report(report));
    }

    for (const auto& s : setups) {
        const Identifier r = root_of_oracle(target, ring.nodes(), *s.params);
        log.record(fmt::format("{} root of {}", to_string(s.algorithm), kExampleTarget), r == root,
                   fmt::format("got {}", render_id(r, *s.params)));
    }

    const auto hop_check = [&](Algorithm algorithm, std::string_view at, std::string_view want) {
        const RoutingSnapshot& snap = snapshots.at(algorithm);
        const auto decision = next_hop(snap, parse_id(at, snap.params()), target);
        const bool ok = !decision.is_root() && render_id(decision.node, snap.params()) == want;
        log.record(fmt::format("{} next hop at {}", to_string(algorithm), at), ok,
                   decision.is_root() ? std::string("declared root")
                                      : fmt::format("got {}", render_id(decision.node, snap.params())));
    };
    hop_check(Algorithm::Tapestry, "4EFC", "4EFB");
    hop_check(Algorithm::Kademlia, "4ECD", "4EFD");
    hop_check(Algorithm::Chord, "03A6", "456B");
    hop_check(Algorithm::Chord, "4EF7", "4EFB");
    hop_check(Algorithm::Pastry, "03A6", "456B");

    for (const auto& expected : kExpectedTraces) {
        const RoutingSnapshot& snap = snapshots.at(expected.algorithm);
        const MetricParams& p = snap.params();
        const std::string name = fmt::format("{} trace {} to {}", to_string(expected.algorithm), kExampleSource,
                                             kExampleTarget);
        try {
            const LookupTrace trace = lookup(snap, parse_id(kExampleSource, p), target);
            const auto path = trace.path();
            bool ok = path.size() >= 2 && render_id(path[1], p) == expected.first_hop &&
                      render_id(trace.root(), p) == expected.root;
            if (!expected.path.empty()) ok = ok && path == ids_of(expected.path, p);
            log.record(name, ok, fmt::format("got {}", path_text(path, p)));
        } catch (const RoutingFailure& f) {
            log.record(name, false, f.what());
        }
    }

    for (const auto& s : setups) {
        const std::string name = fmt::format("{} put/get {}", to_string(s.algorithm), kExampleTarget);
        try {
            Overlay overlay(std::vector<Identifier>(ring.nodes().begin(), ring.nodes().end()), *s.params,
                            s.algorithm, s.options);
            const Placement placed = overlay.put(target, "v");
            const GetResult got = overlay.get(parse_id(kExampleSource, *s.params), target);
            const bool ok = placed.root == root && got.value == std::optional<std::string>("v") &&
                            got.trace.root() == root;
            log.record(name, ok, fmt::format("stored at {}, read {}", render_id(placed.root, *s.params),
                                             got.value.value_or("<none>")));
        } catch (const std::exception& e) {
            log.record(name, false, e.what());
        }
    }

    out << fmt::format("{} passed, {} failed\n", log.passed(), log.failed());
    return log.failed() == 0 ? kExitOk : kExitVerification;
}

int cmd_hash(const Scenario& scenario, std::string_view text, std::ostream& out, std::ostream&) {
    const MetricParams params = scenario.params();
    unsigned char digest[SHA_DIGEST_LENGTH];
    SHA1(reinterpret_cast<const unsigned char*>(text.data()), text.size(), digest);
    std::string hex;
    for (unsigned char b : digest) hex += fmt::format("{:02X}", b);
    const Uint160 full = Uint160::from_hex(hex);
    out << render_id(Identifier{full >> (Uint160::kBits - params.width())}, params) << '\n';
    return kExitOk;
}

int run_guarded(const std::function<int()>& body, std::ostream& err) {
    try {
        return body();
    } catch (const RoutingFailure& e) {
        err << "routing failure: " << e.what() << '\n';
        return kExitRouting;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << '\n';
    } catch (const FixtureError& e) {
        err << "fixture error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
    return kExitUsage;
}

}  // namespace gdht::harness
