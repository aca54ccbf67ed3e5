#include "gdht/lookup.hpp"

#include <algorithm>
#include <thread>
#include <unordered_set>

#include <fmt/format.h>

#include "gdht/random.hpp"

namespace gdht {

std::vector<Identifier> LookupTrace::path() const {
    std::vector<Identifier> out;
    out.reserve(hops.size());
    for (const Hop& h : hops) out.push_back(h.node);
    return out;
}

namespace {

HopDecision root_at(const Identifier& node, const Identifier& target, const MetricParams& params) {
    return {HopDecision::Kind::Root, node, distance(node, target, params)};
}

HopDecision forward_to(const Identifier& node, const Identifier& target, const MetricParams& params) {
    return {HopDecision::Kind::Forward, node, distance(node, target, params)};
}

// x in (from, to] going clockwise; from == to denotes the whole ring.
bool in_half_open(const Identifier& x, const Identifier& from, const Identifier& to,
                  const MetricParams& params) {
    if (from == to) return true;
    const Uint160 gx = ring_gap(x, from, params);
    return !gx.is_zero() && gx <= ring_gap(to, from, params);
}

// x in (from, to) going clockwise.
bool in_open(const Identifier& x, const Identifier& from, const Identifier& to, const MetricParams& params) {
    const Uint160 gx = ring_gap(x, from, params);
    if (gx.is_zero()) return false;
    return from == to || gx < ring_gap(to, from, params);
}

}  // namespace

HopDecision next_hop_generic(const Identifier& current, std::span<const Identifier> entries,
                             const Identifier& target, const MetricParams& params) {
    Identifier best = current;
    for (const Identifier& e : entries) {
        if (closer_root(e, best, target, params)) best = e;
    }
    return best == current ? root_at(current, target, params) : forward_to(best, target, params);
}

HopDecision next_hop_chord(const ChordState& state, const Identifier& target, const MetricParams& params) {
    const Identifier& self = state.owner;
    if (in_half_open(target, state.predecessor, self, params)) return root_at(self, target, params);
    if (in_half_open(target, self, state.successor, params)) return forward_to(state.successor, target, params);

    std::optional<Identifier> best;
    Uint160 best_gap;
    const auto consider = [&](const Identifier& e) {
        if (!in_open(e, self, target, params)) return;
        const Uint160 g = ring_gap(e, self, params);
        if (!best || g > best_gap) {
            best = e;
            best_gap = g;
        }
    };
    for (const Identifier& f : state.fingers) consider(f);
    consider(state.successor);
    consider(state.predecessor);
    return forward_to(best.value_or(state.successor), target, params);
}

HopDecision next_hop_pastry(const PastryState& state, const Identifier& target, const MetricParams& params) {
    const Identifier& self = state.self();
    const auto& succ = state.leaf_successors;
    const auto& pred = state.leaf_predecessors;
    if (succ.empty() && pred.empty()) return root_at(self, target, params);

    const std::size_t half = params.leafset_size() / 2;
    bool covers_ring = succ.size() < half || pred.size() < half || succ.empty() || pred.empty();
    for (const Identifier& s : succ) {
        if (std::find(pred.begin(), pred.end(), s) != pred.end()) covers_ring = true;
    }
    const bool in_leaf_span =
        covers_ring || ring_gap(target, pred.back(), params) <= ring_gap(succ.back(), pred.back(), params);

    if (in_leaf_span) {
        Identifier best = self;
        for (const auto* side : {&succ, &pred}) {
            for (const Identifier& e : *side) {
                if (closer_root(e, best, target, params)) best = e;
            }
        }
        return best == self ? root_at(self, target, params) : forward_to(best, target, params);
    }

    Identifier best = self;
    unsigned best_prefix = shared_prefix_digits(self, target, params);
    const auto consider = [&](const Identifier& e) {
        const unsigned p = shared_prefix_digits(e, target, params);
        if (p > best_prefix || (p == best_prefix && closer_root(e, best, target, params))) {
            best = e;
            best_prefix = p;
        }
    };
    for (const Identifier& e : state.matrix.foreign_entries()) consider(e);
    for (const Identifier& e : succ) consider(e);
    for (const Identifier& e : pred) consider(e);
    return best == self ? root_at(self, target, params) : forward_to(best, target, params);
}

HopDecision next_hop(const RoutingSnapshot& snapshot, const Identifier& current, const Identifier& target) {
    const MetricParams& params = snapshot.params();
    const RoutingState& state = snapshot.state_of(current);
    switch (snapshot.algorithm()) {
    case Algorithm::Chord: return next_hop_chord(std::get<ChordState>(state), target, params);
    case Algorithm::Pastry: return next_hop_pastry(std::get<PastryState>(state), target, params);
    case Algorithm::Tapestry:
    case Algorithm::Kademlia: return next_hop_generic(current, snapshot.entries_of(current), target, params);
    }
    throw std::logic_error("unknown algorithm");
}

LookupTrace lookup(const RoutingSnapshot& snapshot, const Identifier& source, const Identifier& target) {
    const MetricParams& params = snapshot.params();
    if (!snapshot.contains(source)) throw std::out_of_range("lookup source is not a member");
    LookupTrace trace{target, {{source, distance(source, target, params)}}};
    Identifier current = source;
    for (;;) {
        const HopDecision d = next_hop(snapshot, current, target);
        if (d.is_root()) return trace;
        const auto fail = [&](const std::string& why) {
            return RoutingFailure(fmt::format("lookup of {} from {}: {}", render_id(target, params),
                                              render_id(source, params), why),
                                  trace);
        };
        if (!snapshot.contains(d.node)) {
            throw fail("forwarded to non-member " + render_id(d.node, params));
        }
        for (const Hop& h : trace.hops) {
            if (h.node == d.node) throw fail("revisited " + render_id(d.node, params));
        }
        if (trace.hops.size() >= snapshot.size()) throw fail("hop budget exceeded");
        trace.hops.push_back({d.node, d.distance_after});
        current = d.node;
    }
}

// ---------------------------------------------------------------------------
// Convergence

double ConvergenceReport::mean_hops() const {
    std::uint64_t n = 0;
    long double sum = 0;
    for (const auto& [hops, count] : hop_histogram) {
        n += count;
        sum += static_cast<long double>(hops) * count;
    }
    return n == 0 ? 0.0 : static_cast<double>(sum / n);
}

std::size_t ConvergenceReport::max_hops() const {
    return hop_histogram.empty() ? 0 : hop_histogram.rbegin()->first;
}

void ConvergenceReport::merge(const ConvergenceReport& other) {
    lookups += other.lookups;
    mismatch_count += other.mismatch_count;
    for (const Mismatch& m : other.mismatches) {
        if (mismatches.size() >= kMaxRecorded) break;
        mismatches.push_back(m);
    }
    for (const auto& [hops, count] : other.hop_histogram) hop_histogram[hops] += count;
}

namespace {

struct Job {
    Identifier hash;
    std::optional<Identifier> source;  // empty: every source
};

void run_job(const RoutingSnapshot& snapshot, const Job& job, std::span<const Identifier> sources,
             ConvergenceReport& out) {
    const Identifier oracle = root_of_oracle(job.hash, snapshot.ring().nodes(), snapshot.params());
    const auto one = [&](const Identifier& source) {
        ++out.lookups;
        try {
            const LookupTrace trace = lookup(snapshot, source, job.hash);
            if (trace.root() != oracle) {
                ++out.mismatch_count;
                if (out.mismatches.size() < ConvergenceReport::kMaxRecorded) {
                    out.mismatches.push_back({source, job.hash, trace.root(), oracle, {}});
                }
            }
            ++out.hop_histogram[trace.hop_count()];
        } catch (const RoutingFailure& e) {
            ++out.mismatch_count;
            if (out.mismatches.size() < ConvergenceReport::kMaxRecorded) {
                out.mismatches.push_back({source, job.hash, std::nullopt, oracle, e.what()});
            }
        }
    };
    if (job.source) {
        one(*job.source);
    } else {
        for (const Identifier& s : sources) one(s);
    }
}

}  // namespace

ConvergenceReport verify_convergence(const RoutingSnapshot& snapshot, const HashSelection& selection,
                                     std::span<const Identifier> sources, unsigned threads) {
    const MetricParams& params = snapshot.params();
    if (sources.empty()) sources = snapshot.ring().nodes();
    for (const Identifier& s : sources) {
        if (!snapshot.contains(s)) throw std::invalid_argument("sweep source is not a member");
    }

    ConvergenceReport report;
    report.algorithm = snapshot.algorithm();
    report.nodes = snapshot.size();
    report.sources = sources.size();

    std::vector<Job> jobs;
    std::uint64_t exhaustive_count = 0;
    switch (selection.mode) {
    case HashSelection::Mode::Exhaustive:
        if (params.width() > 32) throw std::invalid_argument("exhaustive sweeps need W <= 32");
        exhaustive_count = std::uint64_t{1} << params.width();
        report.hashes = exhaustive_count;
        break;
    case HashSelection::Mode::SampleHashes: {
        std::mt19937_64 rng(selection.seed);
        for (std::uint64_t i = 0; i < selection.count; ++i) jobs.push_back({random_identifier(rng, params), {}});
        report.hashes = selection.count;
        break;
    }
    case HashSelection::Mode::RandomLookups: {
        std::mt19937_64 rng(selection.seed);
        for (std::uint64_t i = 0; i < selection.count; ++i) {
            const Identifier& src = sources[random_index(rng, sources.size())];
            jobs.push_back({random_identifier(rng, params), src});
        }
        report.hashes = selection.count;
        break;
    }
    }

    const std::uint64_t total = exhaustive_count != 0 ? exhaustive_count : jobs.size();
    if (total == 0) return report;
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    const auto workers = static_cast<unsigned>(std::min<std::uint64_t>(threads, total));
    std::vector<ConvergenceReport> partial(workers);
    const auto work = [&](unsigned w) {
        const std::uint64_t begin = total * w / workers;
        const std::uint64_t end = total * (w + 1) / workers;
        for (std::uint64_t i = begin; i < end; ++i) {
            if (exhaustive_count != 0) {
                run_job(snapshot, Job{Identifier{Uint160(i)}, {}}, sources, partial[w]);
            } else {
                run_job(snapshot, jobs[i], sources, partial[w]);
            }
        }
    };
    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }
    for (const auto& p : partial) report.merge(p);
    return report;
}

std::string convergence_csv_header() {
    return "algorithm,N,budget,sources,hashes,mismatches,mean_hops,max_hops";
}

std::string convergence_csv_row(const ConvergenceReport& r) {
    return fmt::format("{},{},{},{},{},{},{:.4f},{}", to_string(r.algorithm), r.nodes, r.budget, r.sources,
                       r.hashes, r.mismatch_count, r.mean_hops(), r.max_hops());
}

}  // namespace gdht
