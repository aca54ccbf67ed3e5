#include "gdht/metric.hpp"

#include <stdexcept>

namespace gdht {

Distance generalized_distance(const Identifier& node, const Identifier& hash,
                              const MetricParams& params) {
    // Lane-wise subtraction with no borrow across digit boundaries: force each
    // lane's top bit on in the minuend and off in the subtrahend, then repair
    // the top bit with the lane's true xor and borrow.
    const Uint160& high = params.lane_high_bits();
    const Uint160 diff = (node.value | high) - (hash.value & ~high);
    const Uint160 fix = (node.value ^ ~hash.value) & high;
    return Distance{(diff ^ fix) & params.modulus_mask()};
}

Distance chord_distance(const Identifier& node, const Identifier& hash, const MetricParams& params) {
    return Distance{ring_gap(node, hash, params)};
}

Distance symmetric_distance(const Identifier& node, const Identifier& hash,
                            const MetricParams& params) {
    const Uint160 forward = ring_gap(node, hash, params);
    const Uint160 backward = ring_gap(hash, node, params);
    return Distance{forward < backward ? forward : backward};
}

Distance distance(const Identifier& node, const Identifier& hash, const MetricParams& params) {
    switch (params.variant()) {
    case MetricVariant::ChordOneWay: return chord_distance(node, hash, params);
    case MetricVariant::PastrySymmetric: return symmetric_distance(node, hash, params);
    case MetricVariant::DigitwiseGeneralized: return generalized_distance(node, hash, params);
    }
    return {};
}

bool closer_root(const Identifier& a, const Identifier& b, const Identifier& hash,
                 const MetricParams& params) {
    const Distance da = distance(a, hash, params);
    const Distance db = distance(b, hash, params);
    if (da != db) return da < db;
    if (a == b) return false;
    // Only the symmetric metric can tie distinct nodes: one sits before the
    // hash and one after. The one before it wins.
    return ring_gap(hash, a, params) < ring_gap(hash, b, params);
}

Identifier root_of_oracle(const Identifier& hash, std::span<const Identifier> nodes,
                          const MetricParams& params) {
    if (nodes.empty()) throw std::invalid_argument("root_of_oracle: empty node set");
    Identifier best = nodes.front();
    for (const Identifier& n : nodes.subspan(1)) {
        if (closer_root(n, best, hash, params)) best = n;
    }
    return best;
}

}  // namespace gdht
