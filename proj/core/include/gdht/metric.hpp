#pragma once

#include <span>

#include "gdht/identifier.hpp"

namespace gdht {

/// Digit-wise clockwise distance from R to H:
///   sum over digits i of ((r_i - h_i + 2^d) mod 2^d) * 2^(d*i).
/// Exact for widths up to 160 bits. d=1 reduces to XOR, k=1 to the Chord gap.
Distance generalized_distance(const Identifier& node, const Identifier& hash,
                              const MetricParams& params);

/// (R - H + 2^W) mod 2^W.
Distance chord_distance(const Identifier& node, const Identifier& hash, const MetricParams& params);

/// min((R - H) mod 2^W, (H - R) mod 2^W).
Distance symmetric_distance(const Identifier& node, const Identifier& hash,
                            const MetricParams& params);

/// Dispatches on params.variant().
Distance distance(const Identifier& node, const Identifier& hash, const MetricParams& params);

/// True when `a` is a strictly better root for `hash` than `b`.
///
/// Smaller distance wins. Equal symmetric distances between distinct nodes
/// resolve to the node preceding the hash on the ring (smaller (H - R) mod 2^W).
bool closer_root(const Identifier& a, const Identifier& b, const Identifier& hash,
                 const MetricParams& params);

/// Brute-force root: the node minimizing distance(node, hash). Throws on an empty set.
Identifier root_of_oracle(const Identifier& hash, std::span<const Identifier> nodes,
                          const MetricParams& params);

}  // namespace gdht
