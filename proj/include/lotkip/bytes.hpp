#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lotkip {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

// Lower-case hex, no separators.
std::string to_hex(ByteView data);

// Accepts upper or lower case, optional ':' / '-' separators. "-" decodes to
// an empty buffer. Throws std::invalid_argument on malformed input.
Bytes from_hex(std::string_view text);

template <std::size_t N>
std::array<std::uint8_t, N> fixed_from_hex(std::string_view text) {
    const Bytes raw = from_hex(text);
    if (raw.size() != N) {
        throw std::invalid_argument("expected " + std::to_string(N) + " bytes, got " +
                                    std::to_string(raw.size()) + " in '" + std::string(text) + "'");
    }
    std::array<std::uint8_t, N> out{};
    std::copy(raw.begin(), raw.end(), out.begin());
    return out;
}

inline std::uint32_t load_le32(const std::uint8_t* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

inline void store_le32(std::uint8_t* p, std::uint32_t v) {
    p[0] = static_cast<std::uint8_t>(v);
    p[1] = static_cast<std::uint8_t>(v >> 8);
    p[2] = static_cast<std::uint8_t>(v >> 16);
    p[3] = static_cast<std::uint8_t>(v >> 24);
}

}  // namespace lotkip
