#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace gdht {

/// Unsigned 160-bit integer with wrap-around (mod 2^160) arithmetic.
///
/// Identifiers of every supported width live in this container; callers mask
/// results down to the identifier width they work with.
class Uint160 {
public:
    static constexpr unsigned kBits = 160;

    constexpr Uint160() = default;
    constexpr explicit Uint160(std::uint64_t v) : limbs_{v, 0, 0} {}
    constexpr Uint160(std::uint32_t hi, std::uint64_t mid, std::uint64_t lo)
        : limbs_{lo, mid, hi} {}

    /// 2^n for n < 160.
    static Uint160 pow2(unsigned n);
    /// 2^bits - 1 for bits <= 160.
    static Uint160 low_mask(unsigned bits);

    Uint160& operator+=(const Uint160& rhs);
    Uint160& operator-=(const Uint160& rhs);
    Uint160& operator&=(const Uint160& rhs);
    Uint160& operator|=(const Uint160& rhs);
    Uint160& operator^=(const Uint160& rhs);
    Uint160& operator<<=(unsigned n);
    Uint160& operator>>=(unsigned n);

    friend Uint160 operator+(Uint160 a, const Uint160& b) { return a += b; }
    friend Uint160 operator-(Uint160 a, const Uint160& b) { return a -= b; }
    friend Uint160 operator&(Uint160 a, const Uint160& b) { return a &= b; }
    friend Uint160 operator|(Uint160 a, const Uint160& b) { return a |= b; }
    friend Uint160 operator^(Uint160 a, const Uint160& b) { return a ^= b; }
    friend Uint160 operator<<(Uint160 a, unsigned n) { return a <<= n; }
    friend Uint160 operator>>(Uint160 a, unsigned n) { return a >>= n; }
    Uint160 operator~() const;

    friend constexpr bool operator==(const Uint160&, const Uint160&) = default;
    friend constexpr std::strong_ordering operator<=>(const Uint160& a, const Uint160& b) {
        for (int i = 2; i >= 0; --i) {
            if (a.limbs_[i] != b.limbs_[i]) return a.limbs_[i] <=> b.limbs_[i];
        }
        return std::strong_ordering::equal;
    }

    bool is_zero() const { return (limbs_[0] | limbs_[1] | limbs_[2]) == 0; }
    bool bit(unsigned n) const;
    /// Index of the most significant set bit, or -1 when zero.
    int highest_bit() const;
    /// `count` bits starting at bit `pos` (count <= 64).
    std::uint64_t extract(unsigned pos, unsigned count) const;
    std::uint64_t low64() const { return limbs_[0]; }
    std::size_t hash() const;

    /// Upper-case hex, zero padded to exactly `digits` characters (low digits kept).
    std::string to_hex(unsigned digits) const;
    /// Parses up to 40 hex characters, case-insensitive. Throws std::invalid_argument.
    static Uint160 from_hex(std::string_view text);

private:
    void clamp() { limbs_[2] &= 0xFFFFFFFFull; }

    std::array<std::uint64_t, 3> limbs_{};
};

}  // namespace gdht
