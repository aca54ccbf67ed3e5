#include "gdht/uint160.hpp"

#include <bit>
#include <functional>
#include <stdexcept>

namespace gdht {

Uint160 Uint160::pow2(unsigned n) {
    if (n >= kBits) throw std::out_of_range("Uint160::pow2 exponent out of range");
    Uint160 r;
    r.limbs_[n / 64] = std::uint64_t{1} << (n % 64);
    return r;
}

Uint160 Uint160::low_mask(unsigned bits) {
    if (bits > kBits) throw std::out_of_range("Uint160::low_mask width out of range");
    Uint160 r;
    for (unsigned i = 0; i < 3; ++i) {
        const unsigned lo = i * 64;
        if (bits >= lo + 64) {
            r.limbs_[i] = ~std::uint64_t{0};
        } else if (bits > lo) {
            r.limbs_[i] = (std::uint64_t{1} << (bits - lo)) - 1;
        }
    }
    r.clamp();
    return r;
}

Uint160& Uint160::operator+=(const Uint160& rhs) {
    std::uint64_t carry = 0;
    for (unsigned i = 0; i < 3; ++i) {
        const std::uint64_t partial = limbs_[i] + rhs.limbs_[i];
        const std::uint64_t sum = partial + carry;
        carry = (partial < limbs_[i] || sum < partial) ? 1 : 0;
        limbs_[i] = sum;
    }
    clamp();
    return *this;
}

Uint160& Uint160::operator-=(const Uint160& rhs) {
    std::uint64_t borrow = 0;
    for (unsigned i = 0; i < 3; ++i) {
        const std::uint64_t a = limbs_[i];
        const std::uint64_t b = rhs.limbs_[i];
        const std::uint64_t d = a - b - borrow;
        borrow = (a < b || (a == b && borrow)) ? 1 : 0;
        limbs_[i] = d;
    }
    clamp();
    return *this;
}

Uint160& Uint160::operator&=(const Uint160& rhs) {
    for (unsigned i = 0; i < 3; ++i) limbs_[i] &= rhs.limbs_[i];
    return *this;
}

Uint160& Uint160::operator|=(const Uint160& rhs) {
    for (unsigned i = 0; i < 3; ++i) limbs_[i] |= rhs.limbs_[i];
    return *this;
}

Uint160& Uint160::operator^=(const Uint160& rhs) {
    for (unsigned i = 0; i < 3; ++i) limbs_[i] ^= rhs.limbs_[i];
    return *this;
}

Uint160 Uint160::operator~() const {
    Uint160 r;
    for (unsigned i = 0; i < 3; ++i) r.limbs_[i] = ~limbs_[i];
    r.clamp();
    return r;
}

Uint160& Uint160::operator<<=(unsigned n) {
    if (n >= kBits) {
        limbs_ = {};
        return *this;
    }
    const unsigned words = n / 64;
    const unsigned bits = n % 64;
    std::array<std::uint64_t, 3> out{};
    for (int i = 2; i >= static_cast<int>(words); --i) {
        const unsigned src = static_cast<unsigned>(i) - words;
        out[i] = limbs_[src] << bits;
        if (bits != 0 && src > 0) out[i] |= limbs_[src - 1] >> (64 - bits);
    }
    limbs_ = out;
    clamp();
    return *this;
}

Uint160& Uint160::operator>>=(unsigned n) {
    if (n >= kBits) {
        limbs_ = {};
        return *this;
    }
    const unsigned words = n / 64;
    const unsigned bits = n % 64;
    std::array<std::uint64_t, 3> out{};
    for (unsigned i = 0; i + words < 3; ++i) {
        const unsigned src = i + words;
        out[i] = limbs_[src] >> bits;
        if (bits != 0 && src + 1 < 3) out[i] |= limbs_[src + 1] << (64 - bits);
    }
    limbs_ = out;
    return *this;
}

bool Uint160::bit(unsigned n) const {
    if (n >= kBits) return false;
    return (limbs_[n / 64] >> (n % 64)) & 1u;
}

int Uint160::highest_bit() const {
    for (int i = 2; i >= 0; --i) {
        if (limbs_[i] != 0) return i * 64 + 63 - std::countl_zero(limbs_[i]);
    }
    return -1;
}

std::uint64_t Uint160::extract(unsigned pos, unsigned count) const {
    if (count == 0) return 0;
    const std::uint64_t v = (*this >> pos).limbs_[0];
    return count >= 64 ? v : (v & ((std::uint64_t{1} << count) - 1));
}

std::size_t Uint160::hash() const {
    std::size_t h = std::hash<std::uint64_t>{}(limbs_[0]);
    h ^= std::hash<std::uint64_t>{}(limbs_[1]) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= std::hash<std::uint64_t>{}(limbs_[2]) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
}

std::string Uint160::to_hex(unsigned digits) const {
    static constexpr char kHex[] = "0123456789ABCDEF";
    std::string out(digits, '0');
    for (unsigned i = 0; i < digits && i < kBits / 4; ++i) {
        out[digits - 1 - i] = kHex[extract(i * 4, 4)];
    }
    return out;
}

Uint160 Uint160::from_hex(std::string_view text) {
    if (text.empty() || text.size() > kBits / 4) {
        throw std::invalid_argument("hex value must have 1 to 40 digits");
    }
    Uint160 r;
    for (char c : text) {
        unsigned v;
        if (c >= '0' && c <= '9') {
            v = static_cast<unsigned>(c - '0');
        } else if (c >= 'a' && c <= 'f') {
            v = static_cast<unsigned>(c - 'a' + 10);
        } else if (c >= 'A' && c <= 'F') {
            v = static_cast<unsigned>(c - 'A' + 10);
        } else {
            throw std::invalid_argument("non-hex character in value");
        }
        r <<= 4;
        r.limbs_[0] |= v;
    }
    return r;
}

}  // namespace gdht
