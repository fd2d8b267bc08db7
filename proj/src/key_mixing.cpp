#include <bit>

#include "lotkip/tkip_crypto.hpp"

namespace lotkip::crypto {

// 802.11i TKIP S-box. Entry i is MK16(2*s, 3*s) over GF(2^8) with s the AES
// S-box value of i.
const std::array<std::uint16_t, 256> kTkipSbox = {
    0xC6A5, 0xF884, 0xEE99, 0xF68D, 0xFF0D, 0xD6BD, 0xDEB1, 0x9154,
    0x6050, 0x0203, 0xCEA9, 0x567D, 0xE719, 0xB562, 0x4DE6, 0xEC9A,
    0x8F45, 0x1F9D, 0x8940, 0xFA87, 0xEF15, 0xB2EB, 0x8EC9, 0xFB0B,
    0x41EC, 0xB367, 0x5FFD, 0x45EA, 0x23BF, 0x53F7, 0xE496, 0x9B5B,
    0x75C2, 0xE11C, 0x3DAE, 0x4C6A, 0x6C5A, 0x7E41, 0xF502, 0x834F,
    0x685C, 0x51F4, 0xD134, 0xF908, 0xE293, 0xAB73, 0x6253, 0x2A3F,
    0x080C, 0x9552, 0x4665, 0x9D5E, 0x3028, 0x37A1, 0x0A0F, 0x2FB5,
    0x0E09, 0x2436, 0x1B9B, 0xDF3D, 0xCD26, 0x4E69, 0x7FCD, 0xEA9F,
    0x121B, 0x1D9E, 0x5874, 0x342E, 0x362D, 0xDCB2, 0xB4EE, 0x5BFB,
    0xA4F6, 0x764D, 0xB761, 0x7DCE, 0x527B, 0xDD3E, 0x5E71, 0x1397,
    0xA6F5, 0xB968, 0x0000, 0xC12C, 0x4060, 0xE31F, 0x79C8, 0xB6ED,
    0xD4BE, 0x8D46, 0x67D9, 0x724B, 0x94DE, 0x98D4, 0xB0E8, 0x854A,
    0xBB6B, 0xC52A, 0x4FE5, 0xED16, 0x86C5, 0x9AD7, 0x6655, 0x1194,
    0x8ACF, 0xE910, 0x0406, 0xFE81, 0xA0F0, 0x7844, 0x25BA, 0x4BE3,
    0xA2F3, 0x5DFE, 0x80C0, 0x058A, 0x3FAD, 0x21BC, 0x7048, 0xF104,
    0x63DF, 0x77C1, 0xAF75, 0x4263, 0x2030, 0xE51A, 0xFD0E, 0xBF6D,
    0x814C, 0x1814, 0x2635, 0xC32F, 0xBEE1, 0x35A2, 0x88CC, 0x2E39,
    0x9357, 0x55F2, 0xFC82, 0x7A47, 0xC8AC, 0xBAE7, 0x322B, 0xE695,
    0xC0A0, 0x1998, 0x9ED1, 0xA37F, 0x4466, 0x547E, 0x3BAB, 0x0B83,
    0x8CCA, 0xC729, 0x6BD3, 0x283C, 0xA779, 0xBCE2, 0x161D, 0xAD76,
    0xDB3B, 0x6456, 0x744E, 0x141E, 0x92DB, 0x0C0A, 0x486C, 0xB8E4,
    0x9F5D, 0xBD6E, 0x43EF, 0xC4A6, 0x39A8, 0x31A4, 0xD337, 0xF28B,
    0xD532, 0x8B43, 0x6E59, 0xDAB7, 0x018C, 0xB164, 0x9CD2, 0x49E0,
    0xD8B4, 0xACFA, 0xF307, 0xCF25, 0xCAAF, 0xF48E, 0x47E9, 0x1018,
    0x6FD5, 0xF088, 0x4A6F, 0x5C72, 0x3824, 0x57F1, 0x73C7, 0x9751,
    0xCB23, 0xA17C, 0xE89C, 0x3E21, 0x96DD, 0x61DC, 0x0D86, 0x0F85,
    0xE090, 0x7C42, 0x71C4, 0xCCAA, 0x90D8, 0x0605, 0xF701, 0x1C12,
    0xC2A3, 0x6A5F, 0xAEF9, 0x69D0, 0x1791, 0x9958, 0x3A27, 0x27B9,
    0xD938, 0xEB13, 0x2BB3, 0x2233, 0xD2BB, 0xA970, 0x0789, 0x33A7,
    0x2DB6, 0x3C22, 0x1592, 0xC920, 0x8749, 0xAAFF, 0x5078, 0xA57A,
    0x038F, 0x59F8, 0x0980, 0x1A17, 0x65DA, 0xD731, 0x84C6, 0xD0B8,
    0x82C3, 0x29B0, 0x5A77, 0x1E11, 0x7BCB, 0xA8FC, 0x6DD6, 0x2C3A,
};

namespace {

constexpr std::uint16_t mk16(std::uint8_t hi, std::uint8_t lo) {
    return static_cast<std::uint16_t>((hi << 8) | lo);
}

constexpr std::uint8_t lo8(std::uint16_t v) { return static_cast<std::uint8_t>(v); }
constexpr std::uint8_t hi8(std::uint16_t v) { return static_cast<std::uint8_t>(v >> 8); }

constexpr std::uint16_t rotr1(std::uint16_t v) { return std::rotr(v, 1); }

}  // namespace

std::uint16_t tkip_sbox(std::uint16_t value) {
    const std::uint16_t hi = kTkipSbox[hi8(value)];
    return static_cast<std::uint16_t>(kTkipSbox[lo8(value)] ^ std::rotl(hi, 8));
}

Ttak phase1_mix(const TemporalKey& tk_key, const TransmitterAddress& ta_addr, std::uint32_t tsc_high32) {
    const auto& tk = tk_key.bytes;
    const auto& ta = ta_addr.bytes;
    const auto tsc = [tsc_high32](unsigned n) { return static_cast<std::uint8_t>(tsc_high32 >> (8 * (n - 2))); };

    std::array<std::uint16_t, 5> t{
        mk16(tsc(3), tsc(2)),
        mk16(tsc(5), tsc(4)),
        mk16(ta[1], ta[0]),
        mk16(ta[3], ta[2]),
        mk16(ta[5], ta[4]),
    };

    for (unsigned i = 0; i < kPhase1LoopCount; ++i) {
        const unsigned j = 2 * (i & 1);
        t[0] += tkip_sbox(t[4] ^ mk16(tk[1 + j], tk[0 + j]));
        t[1] += tkip_sbox(t[0] ^ mk16(tk[5 + j], tk[4 + j]));
        t[2] += tkip_sbox(t[1] ^ mk16(tk[9 + j], tk[8 + j]));
        t[3] += tkip_sbox(t[2] ^ mk16(tk[13 + j], tk[12 + j]));
        t[4] += static_cast<std::uint16_t>(tkip_sbox(t[3] ^ mk16(tk[1 + j], tk[0 + j])) + i);
    }
    return Ttak{t};
}

WepSeed phase2_mix(const Ttak& ttak, const TemporalKey& tk_key, std::uint16_t tsc_low16) {
    const auto& tk = tk_key.bytes;
    const std::uint8_t tsc0 = lo8(tsc_low16);
    const std::uint8_t tsc1 = hi8(tsc_low16);

    std::array<std::uint16_t, 6> ppk{};
    for (std::size_t k = 0; k < 5; ++k) ppk[k] = ttak.words[k];
    ppk[5] = static_cast<std::uint16_t>(ttak.words[4] + mk16(tsc1, tsc0));

    for (unsigned i = 0; i < kPhase2LoopCount; ++i) {
        ppk[0] += tkip_sbox(ppk[5] ^ mk16(tk[1], tk[0]));
        ppk[1] += tkip_sbox(ppk[0] ^ mk16(tk[3], tk[2]));
        ppk[2] += tkip_sbox(ppk[1] ^ mk16(tk[5], tk[4]));
        ppk[3] += tkip_sbox(ppk[2] ^ mk16(tk[7], tk[6]));
        ppk[4] += tkip_sbox(ppk[3] ^ mk16(tk[9], tk[8]));
        ppk[5] += tkip_sbox(ppk[4] ^ mk16(tk[11], tk[10]));
        ppk[0] += rotr1(ppk[5] ^ mk16(tk[13], tk[12]));
        ppk[1] += rotr1(ppk[0] ^ mk16(tk[15], tk[14]));
        ppk[2] += rotr1(ppk[1]);
        ppk[3] += rotr1(ppk[2]);
        ppk[4] += rotr1(ppk[3]);
        ppk[5] += static_cast<std::uint16_t>(rotr1(ppk[4]) + i);
    }

    WepSeed seed{};
    seed[0] = tsc1;
    seed[1] = static_cast<std::uint8_t>((tsc1 | 0x20) & 0x7F);
    seed[2] = tsc0;
    seed[3] = lo8(static_cast<std::uint16_t>((ppk[5] ^ mk16(tk[1], tk[0])) >> 1));
    for (std::size_t i = 0; i < 6; ++i) {
        seed[4 + 2 * i] = lo8(ppk[i]);
        seed[5 + 2 * i] = hi8(ppk[i]);
    }
    return seed;
}

}  // namespace lotkip::crypto
