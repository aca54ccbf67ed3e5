#include "gdht/routing_tables.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include <fmt/format.h>

#include "gdht/metric.hpp"

namespace gdht {

// ---------------------------------------------------------------------------
// NodeRing

NodeRing::NodeRing(std::vector<Identifier> nodes) : nodes_(std::move(nodes)) {
    std::sort(nodes_.begin(), nodes_.end());
    const auto dup = std::adjacent_find(nodes_.begin(), nodes_.end());
    if (dup != nodes_.end()) {
        throw std::invalid_argument("duplicate node id " + dup->value.to_hex(40));
    }
}

bool NodeRing::contains(const Identifier& id) const {
    return std::binary_search(nodes_.begin(), nodes_.end(), id);
}

std::size_t NodeRing::index_of(const Identifier& id) const {
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id);
    if (it == nodes_.end() || *it != id) throw std::out_of_range("node is not a ring member");
    return static_cast<std::size_t>(it - nodes_.begin());
}

const Identifier& NodeRing::successor_inclusive(const Identifier& point) const {
    if (nodes_.empty()) throw std::logic_error("successor on an empty ring");
    const auto it = std::lower_bound(nodes_.begin(), nodes_.end(), point);
    return it == nodes_.end() ? nodes_.front() : *it;
}

const Identifier& NodeRing::step_clockwise(const Identifier& self, std::size_t n) const {
    const std::size_t i = index_of(self);
    return nodes_[(i + n) % nodes_.size()];
}

const Identifier& NodeRing::step_counter_clockwise(const Identifier& self, std::size_t n) const {
    const std::size_t i = index_of(self);
    const std::size_t size = nodes_.size();
    return nodes_[(i + size - n % size) % size];
}

// ---------------------------------------------------------------------------
// PrefixMatrix

PrefixMatrix::PrefixMatrix(Identifier self, unsigned columns, unsigned radix)
    : self_(self), columns_(columns), radix_(radix), cells_(std::size_t{columns} * radix) {}

std::vector<Identifier> PrefixMatrix::foreign_entries() const {
    std::vector<Identifier> out;
    for (const auto& cell : cells_) {
        if (cell && *cell != self_) out.push_back(*cell);
    }
    return out;
}

std::size_t PrefixMatrix::occupied_in_column(unsigned column, bool count_self) const {
    std::size_t n = 0;
    for (unsigned j = 0; j < radix_; ++j) {
        const auto& cell = at(column, j);
        if (cell && (count_self || *cell != self_)) ++n;
    }
    return n;
}

// ---------------------------------------------------------------------------
// State helpers

const Identifier& owner_of(const RoutingState& state) {
    return std::visit([](const auto& s) -> const Identifier& { return s.self(); }, state);
}

Algorithm algorithm_of(const RoutingState& state) {
    switch (state.index()) {
    case 0: return Algorithm::Chord;
    case 1: return Algorithm::Pastry;
    case 2: return Algorithm::Tapestry;
    default: return Algorithm::Kademlia;
    }
}

std::vector<Identifier> known_nodes(const RoutingState& state) {
    std::vector<Identifier> out;
    std::visit(
        [&out](const auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, ChordState>) {
                out = s.fingers;
                out.push_back(s.predecessor);
                out.push_back(s.successor);
            } else if constexpr (std::is_same_v<T, PastryState>) {
                out = s.matrix.foreign_entries();
                out.insert(out.end(), s.leaf_successors.begin(), s.leaf_successors.end());
                out.insert(out.end(), s.leaf_predecessors.begin(), s.leaf_predecessors.end());
            } else if constexpr (std::is_same_v<T, TapestryTable>) {
                out = s.matrix.foreign_entries();
            } else {
                for (const auto& b : s.buckets) {
                    if (b) out.push_back(*b);
                }
            }
        },
        state);
    const Identifier& self = owner_of(state);
    std::erase(out, self);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

void require_member(const Identifier& self, const NodeRing& ring) {
    if (!ring.contains(self)) throw std::invalid_argument("table owner is not a member of the population");
}

void require_table_digits(const MetricParams& params) {
    if (params.digit_bits() > 16) {
        throw std::invalid_argument("prefix tables need a digit size of at most 16 bits");
    }
}

// Is `candidate` a better representative than `incumbent` for a cell owned by `self`?
bool prefer(const Identifier& candidate, const Identifier& incumbent, const Identifier& self,
            const MetricParams& params, SelectionPolicy policy) {
    switch (policy) {
    case SelectionPolicy::MetricNearest: return closer_root(candidate, incumbent, self, params);
    case SelectionPolicy::MetricFarthest: return closer_root(incumbent, candidate, self, params);
    case SelectionPolicy::FirstClockwise:
        return ring_gap(candidate, self, params) < ring_gap(incumbent, self, params);
    }
    return false;
}

PrefixMatrix build_prefix_matrix(const Identifier& self, const NodeRing& ring,
                                 const MetricParams& params, SelectionPolicy policy) {
    PrefixMatrix m(self, params.digits(), params.radix());
    for (const Identifier& node : ring.nodes()) {
        if (node == self) continue;
        const unsigned column = shared_prefix_digits(node, self, params);
        const auto d = static_cast<unsigned>(digit_from_msb(node, column, params));
        auto& cell = m.at(column, d);
        if (!cell || prefer(node, *cell, self, params, policy)) cell = node;
    }
    return m;
}

}  // namespace

ChordState build_chord_state(const Identifier& self, const NodeRing& ring, const MetricParams& params) {
    require_member(self, ring);
    ChordState s;
    s.owner = self;
    s.fingers.reserve(params.finger_count());
    for (unsigned i = 0; i < params.finger_count(); ++i) {
        const Identifier target{(self.value + Uint160::pow2(params.chord_stride() * i)) &
                                params.modulus_mask()};
        s.fingers.push_back(ring.successor_inclusive(target));
    }
    s.successor = ring.step_clockwise(self, 1);
    s.predecessor = ring.step_counter_clockwise(self, 1);
    return s;
}

KademliaTable build_kademlia_table(const Identifier& self, const NodeRing& ring,
                                   const MetricParams& params, SelectionPolicy policy) {
    require_member(self, ring);
    if (params.digit_bits() != 1 || params.variant() != MetricVariant::DigitwiseGeneralized) {
        throw std::invalid_argument("kademlia tables need the one-bit digit-wise metric");
    }
    KademliaTable t;
    t.owner = self;
    t.buckets.resize(params.width());
    for (const Identifier& node : ring.nodes()) {
        if (node == self) continue;
        auto& cell = t.buckets[shared_prefix_bits(node, self, params)];
        if (!cell || prefer(node, *cell, self, params, policy)) cell = node;
    }
    return t;
}

TapestryTable build_tapestry_table(const Identifier& self, const NodeRing& ring,
                                   const MetricParams& params, SelectionPolicy policy) {
    require_member(self, ring);
    require_table_digits(params);
    return TapestryTable{build_prefix_matrix(self, ring, params, policy)};
}

PastryState build_pastry_state(const Identifier& self, const NodeRing& ring,
                               const MetricParams& params, SelectionPolicy policy) {
    require_member(self, ring);
    require_table_digits(params);
    PastryState s{build_prefix_matrix(self, ring, params, policy), {}, {}};
    for (unsigned c = 0; c < params.digits(); ++c) {
        s.matrix.at(c, static_cast<unsigned>(digit_from_msb(self, c, params))) = self;
    }
    const std::size_t half = params.leafset_size() / 2;
    const std::size_t others = ring.size() - 1;
    for (std::size_t n = 1; n <= std::min(half, others); ++n) {
        s.leaf_successors.push_back(ring.step_clockwise(self, n));
        s.leaf_predecessors.push_back(ring.step_counter_clockwise(self, n));
    }
    return s;
}

RoutingState build_state(Algorithm algorithm, const Identifier& self, const NodeRing& ring,
                         const MetricParams& params, SelectionPolicy policy) {
    switch (algorithm) {
    case Algorithm::Chord: return build_chord_state(self, ring, params);
    case Algorithm::Pastry: return build_pastry_state(self, ring, params, policy);
    case Algorithm::Tapestry: return build_tapestry_table(self, ring, params, policy);
    case Algorithm::Kademlia: return build_kademlia_table(self, ring, params, policy);
    }
    throw std::invalid_argument("unknown algorithm");
}

// ---------------------------------------------------------------------------
// Truncation

namespace {

// Digits of `occupied` ordered for retention: nearest clockwise, nearest
// counter-clockwise, second clockwise, second counter-clockwise, ...
std::vector<unsigned> retention_order(const std::vector<unsigned>& occupied, unsigned own,
                                      unsigned radix) {
    auto cw = occupied;
    auto ccw = occupied;
    std::sort(cw.begin(), cw.end(), [&](unsigned a, unsigned b) {
        return (a + radix - own) % radix < (b + radix - own) % radix;
    });
    std::sort(ccw.begin(), ccw.end(), [&](unsigned a, unsigned b) {
        return (own + radix - a) % radix < (own + radix - b) % radix;
    });
    std::vector<unsigned> order;
    std::vector<bool> taken(radix, false);
    for (std::size_t i = 0; i < occupied.size(); ++i) {
        for (unsigned d : {cw[i], ccw[i]}) {
            if (!taken[d]) {
                taken[d] = true;
                order.push_back(d);
            }
        }
    }
    return order;
}

}  // namespace

PrefixMatrix truncate_rows(const PrefixMatrix& matrix, const MetricParams& params, TableBudget budget) {
    if (budget.rows < 2) {
        throw std::invalid_argument("routing table budget must keep at least two entries per column");
    }
    PrefixMatrix out = matrix;
    for (unsigned c = 0; c < matrix.columns(); ++c) {
        const auto own = static_cast<unsigned>(digit_from_msb(matrix.self(), c, params));
        std::vector<unsigned> occupied;
        for (unsigned j = 0; j < matrix.radix(); ++j) {
            if (j != own && matrix.at(c, j)) occupied.push_back(j);
        }
        if (occupied.size() <= budget.rows) continue;
        const auto order = retention_order(occupied, own, matrix.radix());
        for (std::size_t i = budget.rows; i < order.size(); ++i) out.at(c, order[i]).reset();
    }
    return out;
}

TapestryTable truncate_rows(const TapestryTable& table, const MetricParams& params, TableBudget budget) {
    return TapestryTable{truncate_rows(table.matrix, params, budget)};
}

PastryState truncate_rows(const PastryState& state, const MetricParams& params, TableBudget budget) {
    PastryState out = state;
    out.matrix = truncate_rows(state.matrix, params, budget);
    return out;
}

// ---------------------------------------------------------------------------
// Validation

std::string_view to_string(Violation::Kind kind) {
    switch (kind) {
    case Violation::Kind::WrongOwner: return "wrong-owner";
    case Violation::Kind::PatternMismatch: return "pattern-mismatch";
    case Violation::Kind::WronglyEmpty: return "wrongly-empty";
    case Violation::Kind::NotANode: return "not-a-node";
    case Violation::Kind::NotPreferred: return "not-preferred";
    case Violation::Kind::WrongNeighbor: return "wrong-neighbor";
    case Violation::Kind::OverBudget: return "over-budget";
    case Violation::Kind::MissingMandatory: return "missing-mandatory";
    case Violation::Kind::Shape: return "shape";
    }
    return "?";
}

namespace {

class Validator {
public:
    Validator(const NodeRing& ring, const MetricParams& params, std::optional<TableBudget> budget)
        : ring_(ring), params_(params), budget_(budget) {}

    ValidationReport run(const RoutingState& state) {
        if (!ring_.contains(owner_of(state))) {
            add(Violation::Kind::WrongOwner, "owner", id(owner_of(state)) + " is not a member");
            return std::move(report_);
        }
        std::visit([this](const auto& s) { check(s); }, state);
        return std::move(report_);
    }

private:
    std::string id(const Identifier& x) const { return render_id(x, params_); }

    void add(Violation::Kind kind, std::string where, std::string detail) {
        report_.violations.push_back({kind, std::move(where), std::move(detail)});
    }

    void check(const ChordState& s) {
        if (s.fingers.size() != params_.finger_count()) {
            add(Violation::Kind::Shape, "fingers",
                fmt::format("{} fingers, expected {}", s.fingers.size(), params_.finger_count()));
        }
        for (std::size_t i = 0; i < s.fingers.size(); ++i) {
            const Identifier target{
                (s.owner.value + Uint160::pow2(params_.chord_stride() * static_cast<unsigned>(i))) &
                params_.modulus_mask()};
            const Identifier& want = ring_.successor_inclusive(target);
            if (s.fingers[i] != want) {
                add(Violation::Kind::WrongNeighbor, fmt::format("finger {}", i),
                    fmt::format("{} should be {}", id(s.fingers[i]), id(want)));
            }
        }
        const Identifier& succ = ring_.step_clockwise(s.owner, 1);
        const Identifier& pred = ring_.step_counter_clockwise(s.owner, 1);
        if (s.successor != succ) {
            add(Violation::Kind::WrongNeighbor, "leafset S",
                fmt::format("{} should be {}", id(s.successor), id(succ)));
        }
        if (s.predecessor != pred) {
            add(Violation::Kind::WrongNeighbor, "leafset P",
                fmt::format("{} should be {}", id(s.predecessor), id(pred)));
        }
    }

    void check(const KademliaTable& t) {
        if (t.buckets.size() != params_.width()) {
            add(Violation::Kind::Shape, "buckets",
                fmt::format("{} buckets, expected {}", t.buckets.size(), params_.width()));
            return;
        }
        std::vector<std::optional<Identifier>> best(params_.width());
        for (const Identifier& n : ring_.nodes()) {
            if (n == t.owner) continue;
            auto& b = best[shared_prefix_bits(n, t.owner, params_)];
            if (!b || closer_root(n, *b, t.owner, params_)) b = n;
        }
        for (unsigned i = 0; i < params_.width(); ++i) {
            const std::string where = fmt::format("bucket {}", i + 1);
            const auto& cell = t.buckets[i];
            if (!cell) {
                if (best[i]) add(Violation::Kind::WronglyEmpty, where, "an eligible node exists");
                continue;
            }
            if (!ring_.contains(*cell)) {
                add(Violation::Kind::NotANode, where, id(*cell));
                continue;
            }
            if (*cell == t.owner || shared_prefix_bits(*cell, t.owner, params_) != i) {
                add(Violation::Kind::PatternMismatch, where,
                    fmt::format("{} does not share exactly {} leading bits", id(*cell), i));
                continue;
            }
            if (best[i] && *cell != *best[i]) {
                add(Violation::Kind::NotPreferred, where,
                    fmt::format("{} is farther than {}", id(*cell), id(*best[i])));
            }
        }
    }

    void check(const TapestryTable& t) { check_matrix(t.matrix, false); }

    void check(const PastryState& s) {
        check_matrix(s.matrix, true);
        const std::size_t half = params_.leafset_size() / 2;
        const std::size_t count = std::min(half, ring_.size() - 1);
        check_leaves(s.leaf_successors, count, "S",
                     [&](std::size_t n) { return ring_.step_clockwise(s.self(), n); });
        check_leaves(s.leaf_predecessors, count, "P",
                     [&](std::size_t n) { return ring_.step_counter_clockwise(s.self(), n); });
    }

    template <typename Step>
    void check_leaves(const std::vector<Identifier>& got, std::size_t count, const char* side, Step step) {
        if (got.size() != count) {
            add(Violation::Kind::Shape, fmt::format("leafset {}", side),
                fmt::format("{} entries, expected {}", got.size(), count));
        }
        for (std::size_t n = 1; n <= std::min(count, got.size()); ++n) {
            const Identifier want = step(n);
            if (got[n - 1] != want) {
                add(Violation::Kind::WrongNeighbor, fmt::format("leafset {}{}", side, n),
                    fmt::format("{} should be {}", id(got[n - 1]), id(want)));
            }
        }
    }

    void check_matrix(const PrefixMatrix& m, bool self_on_diagonal) {
        const Identifier& self = m.self();
        if (m.columns() != params_.digits() || m.radix() != params_.radix()) {
            add(Violation::Kind::Shape, "matrix",
                fmt::format("{}x{} cells, expected {}x{}", m.columns(), m.radix(), params_.digits(),
                            params_.radix()));
            return;
        }
        // inhabited[c][j]: some node shares exactly c digits with self and has digit j next.
        std::vector<std::vector<bool>> inhabited(m.columns(), std::vector<bool>(m.radix(), false));
        for (const Identifier& n : ring_.nodes()) {
            if (n == self) continue;
            const unsigned c = shared_prefix_digits(n, self, params_);
            inhabited[c][digit_from_msb(n, c, params_)] = true;
        }
        for (unsigned c = 0; c < m.columns(); ++c) {
            const auto own = static_cast<unsigned>(digit_from_msb(self, c, params_));
            for (unsigned j = 0; j < m.radix(); ++j) {
                const std::string where = fmt::format("column {} digit {:X}", c + 1, j);
                const auto& cell = m.at(c, j);
                if (j == own) {
                    if (self_on_diagonal && cell != self) {
                        add(Violation::Kind::PatternMismatch, where, "owner's own digit must hold the owner");
                    } else if (!self_on_diagonal && cell) {
                        add(Violation::Kind::PatternMismatch, where,
                            fmt::format("{} occupies the owner's own digit", id(*cell)));
                    }
                    continue;
                }
                if (!cell) {
                    if (!budget_ && inhabited[c][j]) {
                        add(Violation::Kind::WronglyEmpty, where, "an eligible node exists");
                    }
                    continue;
                }
                if (!ring_.contains(*cell)) {
                    add(Violation::Kind::NotANode, where, id(*cell));
                    continue;
                }
                if (*cell == self || shared_prefix_digits(*cell, self, params_) != c ||
                    digit_from_msb(*cell, c, params_) != j) {
                    add(Violation::Kind::PatternMismatch, where,
                        fmt::format("{} does not match prefix length {} with digit {:X}", id(*cell), c, j));
                }
            }
            if (budget_) check_budget(m, c, own, inhabited[c]);
        }
    }

    void check_budget(const PrefixMatrix& m, unsigned c, unsigned own, const std::vector<bool>& inhabited) {
        const std::size_t used = m.occupied_in_column(c);
        if (used > budget_->rows) {
            add(Violation::Kind::OverBudget, fmt::format("column {}", c + 1),
                fmt::format("{} entries, budget {}", used, budget_->rows));
        }
        const unsigned radix = m.radix();
        for (unsigned step = 1; step < radix; ++step) {
            const unsigned j = (own + step) % radix;
            if (inhabited[j]) {
                if (!m.at(c, j)) {
                    add(Violation::Kind::MissingMandatory, fmt::format("column {} digit {:X}", c + 1, j),
                        "nearest clockwise digit is missing");
                }
                break;
            }
        }
        for (unsigned step = 1; step < radix; ++step) {
            const unsigned j = (own + radix - step) % radix;
            if (inhabited[j]) {
                if (!m.at(c, j)) {
                    add(Violation::Kind::MissingMandatory, fmt::format("column {} digit {:X}", c + 1, j),
                        "nearest counter-clockwise digit is missing");
                }
                break;
            }
        }
    }

    const NodeRing& ring_;
    const MetricParams& params_;
    std::optional<TableBudget> budget_;
    ValidationReport report_;
};

}  // namespace

ValidationReport validate_table(const RoutingState& state, const NodeRing& ring,
                                const MetricParams& params, std::optional<TableBudget> budget) {
    return Validator(ring, params, budget).run(state);
}

}  // namespace gdht
