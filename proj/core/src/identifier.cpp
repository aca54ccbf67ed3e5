#include "gdht/identifier.hpp"

#include <algorithm>
#include <cctype>

namespace gdht {

std::string_view to_string(MetricVariant v) {
    switch (v) {
    case MetricVariant::ChordOneWay: return "chord-one-way";
    case MetricVariant::PastrySymmetric: return "pastry-symmetric";
    case MetricVariant::DigitwiseGeneralized: return "digitwise";
    }
    return "?";
}

std::string_view to_string(Algorithm a) {
    switch (a) {
    case Algorithm::Chord: return "chord";
    case Algorithm::Pastry: return "pastry";
    case Algorithm::Tapestry: return "tapestry";
    case Algorithm::Kademlia: return "kademlia";
    }
    return "?";
}

Algorithm parse_algorithm(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "chord") return Algorithm::Chord;
    if (lower == "pastry") return Algorithm::Pastry;
    if (lower == "tapestry") return Algorithm::Tapestry;
    if (lower == "kademlia") return Algorithm::Kademlia;
    throw std::invalid_argument("unknown algorithm '" + std::string(text) + "'");
}

MetricParams::MetricParams(unsigned width, unsigned digit_bits, MetricVariant variant,
                           unsigned chord_stride, unsigned leafset_size)
    : width_(width),
      digit_bits_(digit_bits),
      variant_(variant),
      chord_stride_(chord_stride),
      leafset_size_(leafset_size) {
    if (width_ == 0 || width_ > Uint160::kBits) {
        throw std::invalid_argument("identifier width must be in [1, 160]");
    }
    if (variant_ == MetricVariant::ChordOneWay) digit_bits_ = width_;
    if (digit_bits_ == 0 || digit_bits_ > width_ || width_ % digit_bits_ != 0) {
        throw std::invalid_argument("digit size must divide the identifier width");
    }
    if (variant_ == MetricVariant::PastrySymmetric && digit_bits_ > 16) {
        throw std::invalid_argument("pastry matrix digit size must be at most 16 bits");
    }
    if (variant_ == MetricVariant::ChordOneWay) {
        if (chord_stride_ == 0 || width_ % chord_stride_ != 0) {
            throw std::invalid_argument("chord finger stride must divide the identifier width");
        }
        if (leafset_size_ != 2) {
            throw std::invalid_argument("chord keeps exactly one predecessor and one successor");
        }
    }
    if (variant_ == MetricVariant::PastrySymmetric &&
        (leafset_size_ < 2 || leafset_size_ % 2 != 0)) {
        throw std::invalid_argument("pastry leafset size must be even and at least 2");
    }

    modulus_mask_ = Uint160::low_mask(width_);
    const unsigned lane = variant_ == MetricVariant::DigitwiseGeneralized ? digit_bits_ : width_;
    for (unsigned top = lane - 1; top < width_; top += lane) {
        lane_high_bits_ |= Uint160::pow2(top);
    }
}

MetricParams MetricParams::for_algorithm(Algorithm algorithm, unsigned width,
                                         unsigned digit_bits, unsigned chord_stride,
                                         unsigned leafset_size) {
    switch (algorithm) {
    case Algorithm::Chord:
        return MetricParams(width, width, MetricVariant::ChordOneWay, chord_stride, 2);
    case Algorithm::Pastry:
        return MetricParams(width, digit_bits == 0 ? 4 : digit_bits,
                            MetricVariant::PastrySymmetric, chord_stride, leafset_size);
    case Algorithm::Tapestry:
        return MetricParams(width, digit_bits == 0 ? 4 : digit_bits,
                            MetricVariant::DigitwiseGeneralized, chord_stride, leafset_size);
    case Algorithm::Kademlia:
        if (digit_bits != 0 && digit_bits != 1) {
            throw std::invalid_argument("kademlia uses one bit per digit");
        }
        return MetricParams(width, 1, MetricVariant::DigitwiseGeneralized, chord_stride,
                            leafset_size);
    }
    throw std::invalid_argument("unknown algorithm");
}

Identifier parse_id(std::string_view text, const MetricParams& params) {
    const unsigned want = params.hex_digits();
    if (text.size() != want) {
        throw ParseError("identifier '" + std::string(text) + "' has " +
                             std::to_string(text.size()) + " hex digits, expected " +
                             std::to_string(want),
                         std::min<std::size_t>(text.size(), want));
    }
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (!std::isxdigit(static_cast<unsigned char>(text[i]))) {
            throw ParseError("identifier '" + std::string(text) + "' has a non-hex character at position " +
                                 std::to_string(i),
                             i);
        }
    }
    const Uint160 value = Uint160::from_hex(text);
    if ((value & ~params.modulus_mask()) != Uint160{}) {
        throw ParseError("identifier '" + std::string(text) + "' exceeds " +
                             std::to_string(params.width()) + " bits",
                         0);
    }
    return Identifier{value};
}

std::string render_id(const Identifier& id, const MetricParams& params) {
    return id.value.to_hex(params.hex_digits());
}

std::string render_distance(const Distance& d, const MetricParams& params) {
    return d.value.to_hex(params.hex_digits());
}

std::uint64_t digit(const Identifier& id, unsigned index, const MetricParams& params) {
    return id.value.extract(index * params.digit_bits(), params.digit_bits());
}

std::uint64_t digit_from_msb(const Identifier& id, unsigned position, const MetricParams& params) {
    return digit(id, params.digits() - 1 - position, params);
}

unsigned shared_prefix_bits(const Identifier& a, const Identifier& b, const MetricParams& params) {
    const int top = (a.value ^ b.value).highest_bit();
    if (top < 0) return params.width();
    return params.width() - 1 - static_cast<unsigned>(top);
}

unsigned shared_prefix_digits(const Identifier& a, const Identifier& b, const MetricParams& params) {
    return shared_prefix_bits(a, b, params) / params.digit_bits();
}

Uint160 ring_gap(const Identifier& a, const Identifier& b, const MetricParams& params) {
    return (a.value - b.value) & params.modulus_mask();
}

}  // namespace gdht
