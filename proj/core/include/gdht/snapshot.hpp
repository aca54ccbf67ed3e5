#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gdht/routing_tables.hpp"

namespace gdht {

/// Row budgets for prefix tables: one for everyone, overridden per node.
struct BudgetPlan {
    std::optional<unsigned> all;
    std::map<Identifier, unsigned> per_node;

    bool empty() const { return !all && per_node.empty(); }
    std::optional<TableBudget> for_node(const Identifier& id) const;
    /// "full", the shared budget, or "mixed".
    std::string label() const;
};

struct SnapshotOptions {
    SelectionPolicy policy = SelectionPolicy::MetricNearest;
    BudgetPlan budgets;
    /// Tables loaded verbatim for some owners; everyone else is built.
    std::map<Identifier, RoutingState> fixtures;
};

/// Immutable routing state of a whole population. Lookups walk it one node's
/// state at a time.
class RoutingSnapshot {
public:
    RoutingSnapshot(Algorithm algorithm, MetricParams params, NodeRing ring,
                    std::vector<RoutingState> states);

    /// Builds every member's state, applies fixtures and budgets.
    /// Throws std::invalid_argument for budgets on chord/kademlia, budgets below
    /// two rows, or fixtures whose owner is not a member.
    static RoutingSnapshot build(Algorithm algorithm, const MetricParams& params, NodeRing ring,
                                 const SnapshotOptions& options = {});

    Algorithm algorithm() const { return algorithm_; }
    const MetricParams& params() const { return params_; }
    const NodeRing& ring() const { return ring_; }
    std::size_t size() const { return ring_.size(); }
    bool contains(const Identifier& id) const { return ring_.contains(id); }

    const RoutingState& state_of(const Identifier& id) const;
    /// Distinct nodes referenced by `id`'s state, excluding `id`.
    std::span<const Identifier> entries_of(const Identifier& id) const;

    /// Copy where no state refers to `victim` any more (the victim stays a
    /// member). Chord references are redirected to the victim's ring neighbour
    /// on the same side; other cells and leafset slots are dropped.
    RoutingSnapshot without_references_to(const Identifier& victim) const;

private:
    Algorithm algorithm_;
    MetricParams params_;
    NodeRing ring_;
    std::vector<RoutingState> states_;
    std::vector<std::vector<Identifier>> entries_;
};

}  // namespace gdht
