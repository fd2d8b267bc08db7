#include "lotkip/tkip_crypto.hpp"

namespace lotkip::crypto {

namespace {

constexpr std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t n = 0; n < 256; ++n) {
        std::uint32_t c = n;
        for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
        table[n] = c;
    }
    return table;
}

constexpr auto kCrcTable = make_crc_table();

}  // namespace

std::uint32_t crc32(ByteView data) {
    std::uint32_t crc = 0xFFFFFFFFu;
    for (std::uint8_t b : data) crc = kCrcTable[(crc ^ b) & 0xFF] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

Icv crc32_icv(ByteView data) {
    Icv icv{};
    store_le32(icv.data(), crc32(data));
    return icv;
}

}  // namespace lotkip::crypto
