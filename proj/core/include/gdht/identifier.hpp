#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "gdht/uint160.hpp"

namespace gdht {

/// Which closed form of the distance a space uses.
enum class MetricVariant {
    ChordOneWay,           // whole id as one digit, clockwise gap
    PastrySymmetric,       // whole id as one digit, shorter of both gaps
    DigitwiseGeneralized,  // per-digit clockwise gap, weighted by position
};

/// The four overlay families that are parameterizations of the metric.
enum class Algorithm { Chord, Pastry, Tapestry, Kademlia };

std::string_view to_string(MetricVariant v);
std::string_view to_string(Algorithm a);
/// Accepts "chord", "pastry", "tapestry", "kademlia" (case-insensitive).
Algorithm parse_algorithm(std::string_view text);

class ParseError : public std::invalid_argument {
public:
    ParseError(const std::string& what, std::size_t position)
        : std::invalid_argument(what), position_(position) {}
    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

/// Parameters of an identifier space and its distance metric.
///
/// `width` is W = k*d. For the digit-wise metric `digit_bits` is d. Chord and
/// Pastry metrics treat the whole identifier as one digit; for Pastry
/// `digit_bits` still shapes the prefix matrix. Immutable once constructed.
class MetricParams {
public:
    MetricParams(unsigned width, unsigned digit_bits, MetricVariant variant,
                 unsigned chord_stride = 2, unsigned leafset_size = 4);

    /// Defaults used by the worked examples: Chord m=2 with a 1+1 leafset,
    /// Pastry d=4 with leafset 4, Tapestry d=4, Kademlia d=1.
    static MetricParams for_algorithm(Algorithm algorithm, unsigned width,
                                      unsigned digit_bits = 0, unsigned chord_stride = 2,
                                      unsigned leafset_size = 4);

    unsigned width() const { return width_; }
    unsigned digit_bits() const { return digit_bits_; }
    unsigned digits() const { return width_ / digit_bits_; }
    unsigned radix() const { return 1u << digit_bits_; }
    MetricVariant variant() const { return variant_; }
    unsigned chord_stride() const { return chord_stride_; }
    unsigned finger_count() const { return (width_ + chord_stride_ - 1) / chord_stride_; }
    unsigned leafset_size() const { return leafset_size_; }
    unsigned hex_digits() const { return (width_ + 3) / 4; }

    /// 2^W - 1.
    const Uint160& modulus_mask() const { return modulus_mask_; }
    /// Largest single-digit value 2^d - 1.
    std::uint64_t max_digit() const { return radix() - 1; }
    /// Top bit of each d-bit digit lane; used for borrow-free digit subtraction.
    const Uint160& lane_high_bits() const { return lane_high_bits_; }

    friend bool operator==(const MetricParams& a, const MetricParams& b) {
        return a.width_ == b.width_ && a.digit_bits_ == b.digit_bits_ &&
               a.variant_ == b.variant_ && a.chord_stride_ == b.chord_stride_ &&
               a.leafset_size_ == b.leafset_size_;
    }

private:
    unsigned width_;
    unsigned digit_bits_;
    MetricVariant variant_;
    unsigned chord_stride_;
    unsigned leafset_size_;
    Uint160 modulus_mask_;
    Uint160 lane_high_bits_;
};

/// A W-bit node or hash identifier.
struct Identifier {
    Uint160 value;

    friend constexpr bool operator==(const Identifier&, const Identifier&) = default;
    friend constexpr auto operator<=>(const Identifier&, const Identifier&) = default;
};

/// A W-bit distance value; ordered as an integer.
struct Distance {
    Uint160 value;

    friend constexpr bool operator==(const Distance&, const Distance&) = default;
    friend constexpr auto operator<=>(const Distance&, const Distance&) = default;
};

/// Parses exactly W/4 hex characters. Throws ParseError naming the offending position.
Identifier parse_id(std::string_view text, const MetricParams& params);
/// Upper-case, zero padded to W/4 characters.
std::string render_id(const Identifier& id, const MetricParams& params);
std::string render_distance(const Distance& d, const MetricParams& params);

/// Digit `index` counted from the least significant end (index 0 = r_0).
std::uint64_t digit(const Identifier& id, unsigned index, const MetricParams& params);
/// Digit at `position` counted from the most significant end (position 0 = r_{k-1}).
std::uint64_t digit_from_msb(const Identifier& id, unsigned position, const MetricParams& params);
/// Number of leading d-bit digits two ids share (k when equal).
unsigned shared_prefix_digits(const Identifier& a, const Identifier& b, const MetricParams& params);
/// Number of leading bits two ids share within W (W when equal).
unsigned shared_prefix_bits(const Identifier& a, const Identifier& b, const MetricParams& params);

/// (a - b) mod 2^W.
Uint160 ring_gap(const Identifier& a, const Identifier& b, const MetricParams& params);

}  // namespace gdht

template <>
struct std::hash<gdht::Identifier> {
    std::size_t operator()(const gdht::Identifier& id) const noexcept { return id.value.hash(); }
};
