#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gdht/metric.hpp"
#include "gdht/snapshot.hpp"

namespace gdht {

struct HopDecision {
    enum class Kind { Forward, Root };
    Kind kind;
    Identifier node;          // next hop for Forward, the current node for Root
    Distance distance_after;  // distance(node, target)

    bool is_root() const { return kind == Kind::Root; }
};

struct Hop {
    Identifier node;
    Distance distance;  // distance(node, target) under the snapshot metric

    friend bool operator==(const Hop&, const Hop&) = default;
};

/// Nodes visited from source to root, in order. The last hop is the root.
struct LookupTrace {
    Identifier target;
    std::vector<Hop> hops;

    const Identifier& source() const { return hops.front().node; }
    const Identifier& root() const { return hops.back().node; }
    std::size_t hop_count() const { return hops.empty() ? 0 : hops.size() - 1; }
    std::vector<Identifier> path() const;
};

/// A lookup that exceeded its hop budget, revisited a node, or was handed to a
/// non-member. Carries the trace up to the failure.
class RoutingFailure : public std::runtime_error {
public:
    RoutingFailure(const std::string& what, LookupTrace partial)
        : std::runtime_error(what), partial_(std::move(partial)) {}
    const LookupTrace& partial() const { return partial_; }

private:
    LookupTrace partial_;
};

/// Forward to the entry (or `current`) with the least distance to `target`;
/// Root when `current` is already the least. Used by Tapestry and Kademlia.
HopDecision next_hop_generic(const Identifier& current, std::span<const Identifier> entries,
                             const Identifier& target, const MetricParams& params);

/// Chord: Root when target is in (predecessor, current]; hand to the successor
/// when target is in (current, successor]; otherwise forward to the known node
/// closest before the target on the ring.
HopDecision next_hop_chord(const ChordState& state, const Identifier& target, const MetricParams& params);

/// Pastry: when the target falls inside the leafset span, deliver to the
/// closest leafset member (or stop). Otherwise rank matrix, leafset and self by
/// shared prefix with the target, then by symmetric distance.
HopDecision next_hop_pastry(const PastryState& state, const Identifier& target, const MetricParams& params);

/// One routing decision at `current` using only its own state.
HopDecision next_hop(const RoutingSnapshot& snapshot, const Identifier& current, const Identifier& target);

/// Walks next_hop from `source` until a node declares itself root.
/// Throws RoutingFailure on hop budget (membership size) or revisits, and
/// std::out_of_range when `source` is not a member.
LookupTrace lookup(const RoutingSnapshot& snapshot, const Identifier& source, const Identifier& target);

/// Which (source, hash) pairs a convergence sweep checks.
struct HashSelection {
    enum class Mode {
        Exhaustive,     // every W-bit hash from every source (W <= 32)
        SampleHashes,   // `count` seeded random hashes from every source
        RandomLookups,  // `count` seeded random (source, hash) pairs
    };
    Mode mode = Mode::Exhaustive;
    std::uint64_t count = 0;
    std::uint64_t seed = 1;
};

struct Mismatch {
    Identifier source;
    Identifier target;
    std::optional<Identifier> greedy_root;  // empty when the lookup failed
    Identifier oracle_root;
    std::string failure;
};

struct ConvergenceReport {
    Algorithm algorithm{};
    std::size_t nodes = 0;
    std::string budget = "full";
    std::size_t sources = 0;
    std::uint64_t hashes = 0;
    std::uint64_t lookups = 0;
    std::uint64_t mismatch_count = 0;
    std::vector<Mismatch> mismatches;  // first kMaxRecorded only
    std::map<std::size_t, std::uint64_t> hop_histogram;

    static constexpr std::size_t kMaxRecorded = 64;

    double mean_hops() const;
    std::size_t max_hops() const;
    void merge(const ConvergenceReport& other);
};

/// Compares every requested lookup's root against the brute-force oracle.
/// `threads` = 0 picks the hardware concurrency; merging is deterministic.
ConvergenceReport verify_convergence(const RoutingSnapshot& snapshot, const HashSelection& selection,
                                     std::span<const Identifier> sources = {}, unsigned threads = 0);

std::string convergence_csv_header();
std::string convergence_csv_row(const ConvergenceReport& report);

}  // namespace gdht
