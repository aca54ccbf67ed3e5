#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gdht/lookup.hpp"
#include "gdht/snapshot.hpp"

namespace gdht {

struct KeyMove {
    Identifier key;
    Identifier from;
    Identifier to;

    friend bool operator==(const KeyMove&, const KeyMove&) = default;
    friend auto operator<=>(const KeyMove&, const KeyMove&) = default;
};

struct ChurnEvent {
    enum class Kind { Join, Leave };
    Kind kind;
    Identifier node;
    std::size_t keys_moved = 0;
    std::vector<KeyMove> moves;              // sorted by key
    std::vector<Identifier> affected_nodes;  // members whose routing state changed
    std::uint64_t version = 0;               // overlay version after the event
};

struct Placement {
    Identifier key;
    Identifier root;
    std::optional<LookupTrace> route;  // when a source was given
};

struct GetResult {
    std::optional<std::string> value;
    LookupTrace trace;
};

struct PlacementViolation {
    Identifier key;
    Identifier holder;
    Identifier oracle_root;
};

/// A node population with per-node routing state and key/value stores.
///
/// Membership changes settle synchronously: every routing state is rebuilt,
/// then each stored pair whose oracle root changed moves to its new root.
/// Fixture tables apply to the initial membership only.
class Overlay {
public:
    /// Throws std::invalid_argument on an empty or duplicate list.
    Overlay(std::vector<Identifier> ids, MetricParams params, Algorithm algorithm,
            SnapshotOptions options = {});

    ChurnEvent join(const Identifier& id);
    ChurnEvent leave(const Identifier& id);

    /// Stores at the oracle root, replacing an earlier value for the key.
    /// With a source the greedy route from it is recorded too.
    Placement put(const Identifier& key, std::string value, std::optional<Identifier> source = std::nullopt);
    /// Routes from `source` and reads the value held at the node it reaches.
    GetResult get(const Identifier& source, const Identifier& key) const;

    std::vector<PlacementViolation> audit_placement() const;
    /// Every node's validation report that is not clean.
    std::map<Identifier, ValidationReport> validate() const;

    /// key -> holder for every stored pair.
    std::map<Identifier, Identifier> placement() const;
    std::size_t stored_pairs() const;
    const std::map<Identifier, std::string>& store_of(const Identifier& node) const;

    const RoutingSnapshot& snapshot() const { return snapshot_; }
    const NodeRing& ring() const { return snapshot_.ring(); }
    const MetricParams& params() const { return snapshot_.params(); }
    Algorithm algorithm() const { return snapshot_.algorithm(); }
    std::uint64_t version() const { return version_; }

    /// Moves a pair to an arbitrary holder without touching routing; used to
    /// exercise the audit.
    void misplace(const Identifier& key, const Identifier& holder);

private:
    ChurnEvent settle(ChurnEvent::Kind kind, const Identifier& node, std::vector<Identifier> members);

    SnapshotOptions options_;
    RoutingSnapshot snapshot_;
    std::map<Identifier, std::map<Identifier, std::string>> stores_;
    std::uint64_t version_ = 0;
};

/// One line of a churn script.
struct ChurnCommand {
    enum class Op { Join, Leave, Put, Get, Audit };
    Op op;
    Identifier node;  // JOIN/LEAVE target, GET source
    Identifier key;   // PUT/GET hash
    std::string value;
    std::size_t line = 0;
};

/// Parses `JOIN <hex>`, `LEAVE <hex>`, `PUT <hash> <value>`, `GET <source> <hash>`,
/// `AUDIT`; blank lines and '#' comments are skipped. Throws ParseError whose
/// position is the 1-based line number.
std::vector<ChurnCommand> parse_churn_script(std::string_view text, const MetricParams& params);
std::string render_churn_script(const std::vector<ChurnCommand>& commands, const MetricParams& params);

/// A seeded mix of joins, leaves, puts, gets and audits that is valid to
/// replay against `initial` (never leaves an empty overlay, never joins a member).
std::vector<ChurnCommand> random_churn_script(std::vector<Identifier> initial, std::size_t events,
                                              const MetricParams& params, std::uint64_t seed);

}  // namespace gdht
