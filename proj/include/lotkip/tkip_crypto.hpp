#pragma once

// TKIP primitives: Michael MIC, CRC-32 ICV, two-phase key mixing and RC4.
// Everything here is a pure function of its arguments except Rc4State, which
// is a single-owner mutable cipher state.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lotkip/bytes.hpp"

namespace lotkip::crypto {

/// 64-bit Michael key as two little-endian words: bytes 0..3 -> k0, 4..7 -> k1.
struct MichaelKey {
    std::uint32_t k0 = 0;
    std::uint32_t k1 = 0;

    static MichaelKey from_bytes(std::span<const std::uint8_t, 8> raw);
    std::array<std::uint8_t, 8> to_bytes() const;

    friend bool operator==(const MichaelKey&, const MichaelKey&) = default;
};

struct TemporalKey {
    std::array<std::uint8_t, 16> bytes{};
    friend bool operator==(const TemporalKey&, const TemporalKey&) = default;
};

struct MacAddress {
    std::array<std::uint8_t, 6> bytes{};
    friend bool operator==(const MacAddress&, const MacAddress&) = default;
};

using TransmitterAddress = MacAddress;

/// 48-bit TKIP sequence counter. Byte 0 (TSC0) is the least significant.
/// The low 16 bits feed Phase 2, the high 32 bits feed Phase 1.
class Tsc48 {
public:
    static constexpr std::uint64_t kMax = (std::uint64_t{1} << 48) - 1;

    constexpr Tsc48() = default;
    explicit Tsc48(std::uint64_t value);
    static Tsc48 from_parts(std::uint32_t high32, std::uint16_t low16);

    std::uint64_t value() const { return value_; }
    std::uint8_t byte(unsigned index) const { return static_cast<std::uint8_t>(value_ >> (8 * index)); }
    std::uint16_t low16() const { return static_cast<std::uint16_t>(value_); }
    std::uint32_t high32() const { return static_cast<std::uint32_t>(value_ >> 16); }

    /// Little-endian 6-byte encoding TSC0..TSC5.
    std::array<std::uint8_t, 6> to_bytes() const;

    /// Successor, or nullopt when the 48-bit space is exhausted.
    std::optional<Tsc48> next() const;

    friend auto operator<=>(const Tsc48&, const Tsc48&) = default;

private:
    std::uint64_t value_ = 0;
};

/// Phase-1 output, TTAK0..TTAK4.
struct Ttak {
    std::array<std::uint16_t, 5> words{};
    friend bool operator==(const Ttak&, const Ttak&) = default;
};

/// Phase-2 output. Bytes 0..2 travel in clear as the WEP IV.
using WepSeed = std::array<std::uint8_t, 16>;

/// Michael MIC input header: sa || da || priority || 00 00 00 || [iv].
/// The iv is only present in LOTKIP mode.
struct MicHeader {
    MacAddress sa;
    MacAddress da;
    std::uint8_t priority = 0;
    std::optional<Tsc48> iv;
};

using MicTag = std::array<std::uint8_t, 8>;
using Icv = std::array<std::uint8_t, 4>;

// --- Michael -----------------------------------------------------------------

struct MichaelState {
    std::uint32_t l = 0;
    std::uint32_t r = 0;
    friend bool operator==(const MichaelState&, const MichaelState&) = default;
};

/// The b() mixing function (rotations, XSWAP and additions mod 2^32).
MichaelState michael_block(MichaelState state);

/// Appends 0x5A and 4..7 zero bytes, then splits into little-endian words.
/// The last word is always zero and the one before it never is.
std::vector<std::uint32_t> michael_pad(ByteView message);

/// Michael over an arbitrary byte string.
MicTag michael(const MichaelKey& key, ByteView message);

/// Michael over the serialized MicHeader followed by data.
MicTag michael_mic(const MichaelKey& key, const MicHeader& header, ByteView data);

// --- CRC-32 ICV --------------------------------------------------------------

/// Reflected CRC-32 (poly 0xEDB88320, init and final XOR 0xFFFFFFFF),
/// computed with the 256-entry table method.
std::uint32_t crc32(ByteView data);

/// crc32() serialized little-endian, as carried in the ICV field.
Icv crc32_icv(ByteView data);

/// Value crc32() takes over any buffer followed by its own ICV.
inline constexpr std::uint32_t kCrc32Residue = 0x2144DF1Cu;

// --- key mixing ----------------------------------------------------------------

inline constexpr unsigned kPhase1LoopCount = 8;
/// STEP2 of Phase 2 runs its twelve assignments exactly once.
inline constexpr unsigned kPhase2LoopCount = 1;

/// Raw 8-bit -> 16-bit table (first half of the split S-box).
extern const std::array<std::uint16_t, 256> kTkipSbox;

/// 16-bit non-linear substitution: T[lo] ^ byteswap(T[hi]).
std::uint16_t tkip_sbox(std::uint16_t value);

Ttak phase1_mix(const TemporalKey& tk, const TransmitterAddress& ta, std::uint32_t tsc_high32);

WepSeed phase2_mix(const Ttak& ttak, const TemporalKey& tk, std::uint16_t tsc_low16);

/// Both phases for one TSC.
inline WepSeed mix_key(const TemporalKey& tk, const TransmitterAddress& ta, Tsc48 tsc) {
    return phase2_mix(phase1_mix(tk, ta, tsc.high32()), tk, tsc.low16());
}

// --- RC4 ---------------------------------------------------------------------

class Rc4State {
public:
    /// Key scheduling. Throws std::invalid_argument unless 1 <= key.size() <= 256.
    explicit Rc4State(ByteView key);

    /// One PRGA step.
    std::uint8_t next();

    /// XOR data with the keystream in place.
    void apply(std::span<std::uint8_t> data);
    Bytes apply(ByteView data);

    const std::array<std::uint8_t, 256>& permutation() const { return s_; }
    std::uint8_t i() const { return i_; }
    std::uint8_t j() const { return j_; }

private:
    std::array<std::uint8_t, 256> s_{};
    std::uint8_t i_ = 0;
    std::uint8_t j_ = 0;
};

inline Rc4State rc4_ksa(ByteView key) { return Rc4State(key); }

/// One-shot RC4 with a fresh key schedule.
Bytes rc4_apply(ByteView key, ByteView data);

}  // namespace lotkip::crypto
