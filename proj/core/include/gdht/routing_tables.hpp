#pragma once

#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "gdht/identifier.hpp"

namespace gdht {

/// Sorted, duplicate-free node population viewed as a ring.
class NodeRing {
public:
    NodeRing() = default;
    /// Sorts and checks for duplicates; throws std::invalid_argument on a repeat.
    explicit NodeRing(std::vector<Identifier> nodes);

    std::span<const Identifier> nodes() const { return nodes_; }
    std::size_t size() const { return nodes_.size(); }
    bool empty() const { return nodes_.empty(); }
    bool contains(const Identifier& id) const;
    std::size_t index_of(const Identifier& id) const;

    /// First node at or clockwise after `point`.
    const Identifier& successor_inclusive(const Identifier& point) const;
    /// The n-th node clockwise from member `self` (n >= 1, wraps).
    const Identifier& step_clockwise(const Identifier& self, std::size_t n) const;
    const Identifier& step_counter_clockwise(const Identifier& self, std::size_t n) const;

private:
    std::vector<Identifier> nodes_;
};

/// k columns by 2^d digit cells. Column c (0-based) holds nodes sharing the
/// first c digits with the owner; the cell index is their next digit.
class PrefixMatrix {
public:
    PrefixMatrix() = default;
    PrefixMatrix(Identifier self, unsigned columns, unsigned radix);

    const Identifier& self() const { return self_; }
    unsigned columns() const { return columns_; }
    unsigned radix() const { return radix_; }

    const std::optional<Identifier>& at(unsigned column, unsigned digit) const {
        return cells_[column * radix_ + digit];
    }
    std::optional<Identifier>& at(unsigned column, unsigned digit) {
        return cells_[column * radix_ + digit];
    }
    /// Occupied cells holding a node other than the owner, in column/digit order.
    std::vector<Identifier> foreign_entries() const;
    std::size_t occupied_in_column(unsigned column, bool count_self = false) const;

    friend bool operator==(const PrefixMatrix&, const PrefixMatrix&) = default;

private:
    Identifier self_{};
    unsigned columns_ = 0;
    unsigned radix_ = 0;
    std::vector<std::optional<Identifier>> cells_;
};

struct TapestryTable {
    PrefixMatrix matrix;  // the owner's own digit cells stay empty

    const Identifier& self() const { return matrix.self(); }
    friend bool operator==(const TapestryTable&, const TapestryTable&) = default;
};

struct PastryState {
    PrefixMatrix matrix;  // the owner's own digit cells hold the owner
    std::vector<Identifier> leaf_successors;    // nearest first
    std::vector<Identifier> leaf_predecessors;  // nearest first

    const Identifier& self() const { return matrix.self(); }
    friend bool operator==(const PastryState&, const PastryState&) = default;
};

struct KademliaTable {
    Identifier owner;
    /// bucket[i] (0-based) shares exactly i leading bits with the owner.
    std::vector<std::optional<Identifier>> buckets;

    const Identifier& self() const { return owner; }
    friend bool operator==(const KademliaTable&, const KademliaTable&) = default;
};

struct ChordState {
    Identifier owner;
    std::vector<Identifier> fingers;
    Identifier predecessor;
    Identifier successor;

    const Identifier& self() const { return owner; }
    friend bool operator==(const ChordState&, const ChordState&) = default;
};

using RoutingState = std::variant<ChordState, PastryState, TapestryTable, KademliaTable>;

const Identifier& owner_of(const RoutingState& state);
Algorithm algorithm_of(const RoutingState& state);
/// Every distinct node the state points at, excluding the owner, sorted.
std::vector<Identifier> known_nodes(const RoutingState& state);

/// Representative choice when several nodes fit one cell.
enum class SelectionPolicy {
    MetricNearest,    // default: nearest to the owner under the algorithm's metric
    FirstClockwise,   // first qualifier clockwise from the owner
    MetricFarthest,   // inverted tie rule; only for exercising table checks
};

/// Per-node row budget X for prefix tables: 2 <= X <= 2^d - 1.
struct TableBudget {
    unsigned rows;
};

ChordState build_chord_state(const Identifier& self, const NodeRing& ring, const MetricParams& params);
KademliaTable build_kademlia_table(const Identifier& self, const NodeRing& ring,
                                   const MetricParams& params,
                                   SelectionPolicy policy = SelectionPolicy::MetricNearest);
TapestryTable build_tapestry_table(const Identifier& self, const NodeRing& ring,
                                   const MetricParams& params,
                                   SelectionPolicy policy = SelectionPolicy::MetricNearest);
PastryState build_pastry_state(const Identifier& self, const NodeRing& ring,
                               const MetricParams& params,
                               SelectionPolicy policy = SelectionPolicy::MetricNearest);
RoutingState build_state(Algorithm algorithm, const Identifier& self, const NodeRing& ring,
                         const MetricParams& params,
                         SelectionPolicy policy = SelectionPolicy::MetricNearest);

/// Keeps at most `budget.rows` foreign entries per column. The occupied digit
/// nearest clockwise from the owner's digit and the one nearest
/// counter-clockwise always survive; the rest are filled alternating outward.
/// Throws std::invalid_argument when budget.rows < 2.
PrefixMatrix truncate_rows(const PrefixMatrix& matrix, const MetricParams& params, TableBudget budget);
TapestryTable truncate_rows(const TapestryTable& table, const MetricParams& params, TableBudget budget);
PastryState truncate_rows(const PastryState& state, const MetricParams& params, TableBudget budget);

struct Violation {
    enum class Kind {
        WrongOwner,
        PatternMismatch,   // entry does not fit its cell's prefix/digit pattern
        WronglyEmpty,      // an inhabited cell is empty in full-table mode
        NotANode,          // entry is not a member of the population
        NotPreferred,      // entry is not the selection rule's pick
        WrongNeighbor,     // finger or leafset entry differs from the ring
        OverBudget,        // a column holds more entries than its budget
        MissingMandatory,  // a nearest-neighbor entry required by the budget rule is absent
        Shape,             // wrong number of columns, cells, fingers or buckets
    };
    Kind kind;
    std::string where;   // e.g. "column 2 digit 4", "finger 3", "leafset S1"
    std::string detail;
};

std::string_view to_string(Violation::Kind kind);

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
};

/// Checks a state against the population. With no budget the table is held to
/// full-table rules; with a budget, emptiness is allowed but the column size
/// limit and the two mandatory entries are checked.
ValidationReport validate_table(const RoutingState& state, const NodeRing& ring,
                                const MetricParams& params,
                                std::optional<TableBudget> budget = std::nullopt);

}  // namespace gdht
