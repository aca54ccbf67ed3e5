#include "gdht/snapshot.hpp"

#include <algorithm>
#include <stdexcept>

namespace gdht {

std::optional<TableBudget> BudgetPlan::for_node(const Identifier& id) const {
    if (const auto it = per_node.find(id); it != per_node.end()) return TableBudget{it->second};
    if (all) return TableBudget{*all};
    return std::nullopt;
}

std::string BudgetPlan::label() const {
    if (empty()) return "full";
    if (per_node.empty()) return std::to_string(*all);
    return "mixed";
}

RoutingSnapshot::RoutingSnapshot(Algorithm algorithm, MetricParams params, NodeRing ring,
                                 std::vector<RoutingState> states)
    : algorithm_(algorithm), params_(std::move(params)), ring_(std::move(ring)), states_(std::move(states)) {
    if (states_.size() != ring_.size()) throw std::invalid_argument("one routing state per member required");
    entries_.reserve(states_.size());
    for (std::size_t i = 0; i < states_.size(); ++i) {
        if (owner_of(states_[i]) != ring_.nodes()[i]) {
            throw std::invalid_argument("routing states must follow ring order");
        }
        if (algorithm_of(states_[i]) != algorithm_) {
            throw std::invalid_argument("routing state does not match the snapshot algorithm");
        }
        entries_.push_back(known_nodes(states_[i]));
    }
}

RoutingSnapshot RoutingSnapshot::build(Algorithm algorithm, const MetricParams& params, NodeRing ring,
                                       const SnapshotOptions& options) {
    const bool prefix_table = algorithm == Algorithm::Tapestry || algorithm == Algorithm::Pastry;
    if (!options.budgets.empty() && !prefix_table) {
        throw std::invalid_argument("row budgets apply to tapestry and pastry tables only");
    }
    const unsigned max_rows = prefix_table ? params.radix() - 1 : 0;
    const auto check_rows = [&](unsigned rows) {
        if (rows < 2 || rows > max_rows) {
            throw std::invalid_argument("row budget " + std::to_string(rows) + " outside [2, " +
                                        std::to_string(max_rows) + "]");
        }
    };
    if (options.budgets.all) check_rows(*options.budgets.all);
    for (const auto& [id, rows] : options.budgets.per_node) {
        if (!ring.contains(id)) throw std::invalid_argument("budget given for a non-member");
        check_rows(rows);
    }
    for (const auto& [id, state] : options.fixtures) {
        if (!ring.contains(id)) throw std::invalid_argument("fixture given for a non-member");
        if (algorithm_of(state) != algorithm) throw std::invalid_argument("fixture algorithm mismatch");
    }

    std::vector<RoutingState> states;
    states.reserve(ring.size());
    for (const Identifier& self : ring.nodes()) {
        if (const auto it = options.fixtures.find(self); it != options.fixtures.end()) {
            states.push_back(it->second);
            continue;
        }
        RoutingState s = build_state(algorithm, self, ring, params, options.policy);
        if (const auto budget = options.budgets.for_node(self)) {
            if (auto* t = std::get_if<TapestryTable>(&s)) {
                s = truncate_rows(*t, params, *budget);
            } else if (auto* p = std::get_if<PastryState>(&s)) {
                s = truncate_rows(*p, params, *budget);
            }
        }
        states.push_back(std::move(s));
    }
    return RoutingSnapshot(algorithm, params, std::move(ring), std::move(states));
}

const RoutingState& RoutingSnapshot::state_of(const Identifier& id) const {
    return states_[ring_.index_of(id)];
}

std::span<const Identifier> RoutingSnapshot::entries_of(const Identifier& id) const {
    return entries_[ring_.index_of(id)];
}

RoutingSnapshot RoutingSnapshot::without_references_to(const Identifier& victim) const {
    const Identifier& after = ring_.contains(victim) ? ring_.step_clockwise(victim, 1) : victim;
    const Identifier& before = ring_.contains(victim) ? ring_.step_counter_clockwise(victim, 1) : victim;
    std::vector<RoutingState> states = states_;
    for (auto& state : states) {
        std::visit(
            [&](auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, ChordState>) {
                    std::replace(s.fingers.begin(), s.fingers.end(), victim, after);
                    if (s.successor == victim) s.successor = after;
                    if (s.predecessor == victim) s.predecessor = before;
                } else if constexpr (std::is_same_v<T, KademliaTable>) {
                    for (auto& b : s.buckets) {
                        if (b == victim) b.reset();
                    }
                } else {
                    for (unsigned c = 0; c < s.matrix.columns(); ++c) {
                        for (unsigned j = 0; j < s.matrix.radix(); ++j) {
                            auto& cell = s.matrix.at(c, j);
                            if (cell == victim && s.self() != victim) cell.reset();
                        }
                    }
                    if constexpr (std::is_same_v<T, PastryState>) {
                        std::erase(s.leaf_successors, victim);
                        std::erase(s.leaf_predecessors, victim);
                    }
                }
            },
            state);
    }
    return RoutingSnapshot(algorithm_, params_, ring_, std::move(states));
}

}  // namespace gdht
