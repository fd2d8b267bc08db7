#include <string>

#include "lotkip/tkip_crypto.hpp"

namespace lotkip::crypto {

Tsc48::Tsc48(std::uint64_t value) : value_(value) {
    if (value > kMax) throw std::out_of_range("TSC exceeds 48 bits: " + std::to_string(value));
}

Tsc48 Tsc48::from_parts(std::uint32_t high32, std::uint16_t low16) {
    return Tsc48((static_cast<std::uint64_t>(high32) << 16) | low16);
}

std::array<std::uint8_t, 6> Tsc48::to_bytes() const {
    std::array<std::uint8_t, 6> out{};
    for (unsigned k = 0; k < 6; ++k) out[k] = byte(k);
    return out;
}

std::optional<Tsc48> Tsc48::next() const {
    if (value_ == kMax) return std::nullopt;
    return Tsc48(value_ + 1);
}

}  // namespace lotkip::crypto
