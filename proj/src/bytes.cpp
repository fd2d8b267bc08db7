#include "lotkip/bytes.hpp"

namespace lotkip {

std::string to_hex(ByteView data) {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (std::uint8_t b : data) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 0x0F]);
    }
    return out;
}

namespace {

int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

Bytes from_hex(std::string_view text) {
    if (text == "-") return {};
    Bytes out;
    int pending = -1;
    for (char c : text) {
        if (c == ':' || c == '-') {
            if (pending >= 0) throw std::invalid_argument("hex separator splits a byte in '" + std::string(text) + "'");
            continue;
        }
        const int v = nibble(c);
        if (v < 0) throw std::invalid_argument("invalid hex digit in '" + std::string(text) + "'");
        if (pending < 0) {
            pending = v;
        } else {
            out.push_back(static_cast<std::uint8_t>((pending << 4) | v));
            pending = -1;
        }
    }
    if (pending >= 0) throw std::invalid_argument("odd number of hex digits in '" + std::string(text) + "'");
    return out;
}

}  // namespace lotkip
