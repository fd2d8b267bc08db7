#pragma once

// MSDU <-> MPDU encapsulation for baseline TKIP and LOTKIP.
//
// On-air layout after the (not modelled) MAC header:
//
//   byte 0   TSC1
//   byte 1   (TSC1 | 0x20) & 0x7F
//   byte 2   TSC0
//   byte 3   key_id<<6 | ext_iv<<5 | type_a<<4 | probe<<3 | more_fragments
//   4..7     TSC2..TSC5                      (only when ext_iv is set)
//   ...      RC4(fragment || ICV)
//
// Baseline TKIP frames set ext_iv only. LOTKIP type A sets ext_iv and type_a,
// type B sets neither and has a 4-byte header. A probe is a type-A frame with
// the probe bit and an encrypted 4-byte zero pad instead of payload.
//
// The Michael MIC covers the whole MSDU and is appended before fragmentation;
// every fragment carries its own TSC, per-packet key and ICV. In LOTKIP the
// MIC also covers the TSC of the first fragment.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <variant>
#include <vector>

#include "lotkip/bytes.hpp"
#include "lotkip/countermeasures.hpp"
#include "lotkip/replay_window.hpp"
#include "lotkip/tkip_crypto.hpp"

namespace lotkip::codec {

inline constexpr std::size_t kMaxMsduBytes = 2304;
inline constexpr std::size_t kMinFragThreshold = 256;
inline constexpr std::size_t kMaxFragThreshold = 2346;
inline constexpr std::size_t kIvKeyIdBytes = 4;
inline constexpr std::size_t kExtIvBytes = 4;
inline constexpr std::size_t kMicBytes = 8;
inline constexpr std::size_t kIcvBytes = 4;
inline constexpr std::size_t kWepOverheadBytes = 8;
inline constexpr std::size_t kMacHeaderFcsBytes = 34;
inline constexpr std::size_t kProbePadBytes = 4;
inline constexpr std::uint32_t kDefaultRefreshInterval = 256;

enum class FrameLayout { TkipBaseline, LotkipTypeA, LotkipTypeB, Probe };

const char* to_string(FrameLayout layout);

enum class CodecError {
    Malformed,
    OversizeMsdu,
    BadFragThreshold,
    RekeyRequired,
    SenderProbing,
    ReplayRejected,
    IcvMismatch,
    MicFailure,
    Blackout,
    NoEpochState,
};

const char* to_string(CodecError error);

/// Value-or-error return for the codec operations.
template <class T>
class Result {
public:
    Result(T value) : v_(std::move(value)) {}
    Result(CodecError error) : v_(error) {}

    bool ok() const { return std::holds_alternative<T>(v_); }
    explicit operator bool() const { return ok(); }

    const T& value() const& {
        if (!ok()) throw std::logic_error(std::string("codec result holds error ") + to_string(error()));
        return std::get<T>(v_);
    }
    T&& value() && {
        if (!ok()) throw std::logic_error(std::string("codec result holds error ") + to_string(error()));
        return std::get<T>(std::move(v_));
    }
    CodecError error() const { return std::get<CodecError>(v_); }

private:
    std::variant<T, CodecError> v_;
};

struct SessionKeys {
    crypto::TemporalKey tk;
    crypto::MichaelKey mic_key_tx;
    crypto::MichaelKey mic_key_rx;
    crypto::TransmitterAddress ta;
    std::uint8_t key_id = 0;  // 0..3
};

/// MSDU-level fields covered by the MIC.
struct MsduAddressing {
    crypto::MacAddress sa;
    crypto::MacAddress da;
    std::uint8_t priority = 0;
};

struct MpduFrame {
    FrameLayout layout = FrameLayout::TkipBaseline;
    std::uint8_t key_id = 0;
    bool more_fragments = false;
    crypto::Tsc48 tsc;
    Bytes body;  // RC4(fragment || ICV)

    bool has_ext_iv() const { return layout != FrameLayout::LotkipTypeB; }
    std::size_t header_size() const { return has_ext_iv() ? kIvKeyIdBytes + kExtIvBytes : kIvKeyIdBytes; }
    std::size_t size() const { return header_size() + body.size(); }

    Bytes header() const;
    Bytes serialize() const;
};

/// Header fields as read off the wire. tsc_high32 is absent for type B.
struct ParsedHeader {
    FrameLayout layout = FrameLayout::TkipBaseline;
    std::uint8_t key_id = 0;
    bool more_fragments = false;
    std::uint16_t tsc_low16 = 0;
    std::optional<std::uint32_t> tsc_high32;
    std::size_t header_size = 0;
};

Result<ParsedHeader> parse_header(ByteView frame);

struct OverheadLedger {
    std::size_t iv_key_id = 0;
    std::size_t ext_iv = 0;
    std::size_t mic = 0;
    std::size_t icv = 0;
    std::size_t total() const { return iv_key_id + ext_iv + mic + icv; }
};

/// Per-frame encapsulation overhead (MIC counted as in the per-frame table).
OverheadLedger overhead_of(FrameLayout layout);

// --- baseline TKIP -----------------------------------------------------------

/// Seal one MSDU. next_tsc is the first TSC to use and is advanced past the
/// emitted fragments on success.
Result<std::vector<MpduFrame>> tkip_seal(const SessionKeys& keys, crypto::Tsc48& next_tsc,
                                         const MsduAddressing& addr, ByteView msdu,
                                         std::size_t frag_threshold = kMaxFragThreshold);

/// Open the fragments of one MSDU. Order: blackout, header parse, replay
/// check, key mixing, decrypt, ICV, reassembly, MIC. The window is only
/// updated once the MIC verifies; only a MIC mismatch feeds countermeasures.
Result<Bytes> tkip_open(const SessionKeys& keys, std::span<const Bytes> fragments, ReplayWindow& window,
                        CountermeasureState& countermeasures, const Clock& clock, const MsduAddressing& addr);

// --- LOTKIP ------------------------------------------------------------------

enum class SenderMode { Initial, Streaming, Probing };
enum class AckEvent { AckReceived, AckTimeout };

const char* to_string(SenderMode mode);

struct LotkipSenderState {
    explicit LotkipSenderState(std::uint32_t refresh_interval = kDefaultRefreshInterval,
                               crypto::Tsc48 first_tsc = crypto::Tsc48{});

    SenderMode mode = SenderMode::Initial;
    std::uint32_t refresh_interval;          // K
    std::uint64_t packets_since_refresh = 0; // MPDUs since the last type A
    crypto::Tsc48 next_tsc;
    std::optional<std::uint32_t> cached_high32;
    std::optional<crypto::Ttak> cached_ttak;
    std::uint64_t phase1_runs = 0;
};

/// First MPDU of a session, every K-th MPDU, and the first MPDU of a new
/// upper-IV epoch are type A; the rest are type B. Fails with SenderProbing
/// while the sender is probing.
Result<std::vector<MpduFrame>> lotkip_seal(const SessionKeys& keys, LotkipSenderState& sender,
                                           const MsduAddressing& addr, ByteView msdu,
                                           std::size_t frag_threshold = kMaxFragThreshold);

/// Short probe frame sent while the sender waits for the link to recover.
Result<MpduFrame> lotkip_probe(const SessionKeys& keys, LotkipSenderState& sender);

/// Streaming + timeout -> Probing, Probing + ack -> Initial (so the next
/// data frame is type A), Initial + ack -> Streaming.
SenderMode probe_cycle(LotkipSenderState& sender, AckEvent event);

struct LotkipReceiverState {
    std::optional<std::uint32_t> epoch_high32;
    std::optional<std::uint32_t> cached_high32;
    std::optional<crypto::Ttak> cached_ttak;
    std::uint64_t phase1_runs = 0;
};

/// Open one MSDU (or a probe, which yields an empty buffer). Type-B frames
/// take their upper 32 TSC bits from the epoch set by an earlier type-A
/// frame; a low-IV value far below the last accepted one is read as a
/// rollover into the next epoch. Fails with NoEpochState when no type-A
/// frame has been accepted yet.
Result<Bytes> lotkip_open(const SessionKeys& keys, LotkipReceiverState& receiver, std::span<const Bytes> fragments,
                          ReplayWindow& window, CountermeasureState& countermeasures, const Clock& clock,
                          const MsduAddressing& addr);

/// Split a stream of serialized frames into per-MSDU groups using the
/// more-fragments bit. A trailing incomplete group is returned as is.
std::vector<std::vector<Bytes>> group_fragments(std::span<const Bytes> frames);

}  // namespace lotkip::codec
