#include "lotkip/frame_codec.hpp"

#include <algorithm>

namespace lotkip::codec {

using crypto::Tsc48;

const char* to_string(FrameLayout layout) {
    switch (layout) {
        case FrameLayout::TkipBaseline: return "tkip";
        case FrameLayout::LotkipTypeA: return "lotkip-a";
        case FrameLayout::LotkipTypeB: return "lotkip-b";
        case FrameLayout::Probe: return "probe";
    }
    return "?";
}

const char* to_string(CodecError error) {
    switch (error) {
        case CodecError::Malformed: return "Malformed";
        case CodecError::OversizeMsdu: return "OversizeMsdu";
        case CodecError::BadFragThreshold: return "BadFragThreshold";
        case CodecError::RekeyRequired: return "RekeyRequired";
        case CodecError::SenderProbing: return "SenderProbing";
        case CodecError::ReplayRejected: return "ReplayRejected";
        case CodecError::IcvMismatch: return "IcvMismatch";
        case CodecError::MicFailure: return "MicFailure";
        case CodecError::Blackout: return "Blackout";
        case CodecError::NoEpochState: return "NoEpochState";
    }
    return "?";
}

const char* to_string(SenderMode mode) {
    switch (mode) {
        case SenderMode::Initial: return "Initial";
        case SenderMode::Streaming: return "Streaming";
        case SenderMode::Probing: return "Probing";
    }
    return "?";
}

namespace {

constexpr std::uint8_t kExtIvBit = 1 << 5;
constexpr std::uint8_t kTypeABit = 1 << 4;
constexpr std::uint8_t kProbeBit = 1 << 3;
constexpr std::uint8_t kMoreFragmentsBit = 1 << 0;
constexpr std::uint8_t kReservedBits = 0x06;

std::uint8_t layout_bits(FrameLayout layout) {
    switch (layout) {
        case FrameLayout::TkipBaseline: return kExtIvBit;
        case FrameLayout::LotkipTypeA: return kExtIvBit | kTypeABit;
        case FrameLayout::LotkipTypeB: return 0;
        case FrameLayout::Probe: return kExtIvBit | kTypeABit | kProbeBit;
    }
    return 0;
}

std::optional<FrameLayout> layout_from_bits(std::uint8_t bits) {
    switch (bits & (kExtIvBit | kTypeABit | kProbeBit)) {
        case kExtIvBit: return FrameLayout::TkipBaseline;
        case kExtIvBit | kTypeABit: return FrameLayout::LotkipTypeA;
        case 0: return FrameLayout::LotkipTypeB;
        case kExtIvBit | kTypeABit | kProbeBit: return FrameLayout::Probe;
        default: return std::nullopt;
    }
}

// Everything except the MAC-level checks shared by both seal paths.
std::optional<CodecError> check_seal_args(const SessionKeys& keys, ByteView msdu, std::size_t frag_threshold) {
    if (msdu.size() > kMaxMsduBytes) return CodecError::OversizeMsdu;
    if (frag_threshold < kMinFragThreshold || frag_threshold > kMaxFragThreshold) return CodecError::BadFragThreshold;
    if (keys.key_id > 3) return CodecError::Malformed;
    return std::nullopt;
}

Bytes with_mic(ByteView msdu, const crypto::MicTag& mic) {
    Bytes stream(msdu.begin(), msdu.end());
    stream.insert(stream.end(), mic.begin(), mic.end());
    return stream;
}

std::size_t fragment_count(std::size_t stream_size, std::size_t frag_threshold) {
    return (stream_size + frag_threshold - 1) / frag_threshold;
}

// The all-ones TSC is never handed out so that next_tsc stays representable.
bool tsc_space_left(Tsc48 first, std::size_t count) {
    return first.value() <= Tsc48::kMax - count;
}

Bytes encrypt_fragment(const crypto::WepSeed& seed, ByteView plaintext) {
    Bytes buf(plaintext.begin(), plaintext.end());
    const auto icv = crypto::crc32_icv(plaintext);
    buf.insert(buf.end(), icv.begin(), icv.end());
    crypto::Rc4State rc4(seed);
    rc4.apply(std::span<std::uint8_t>(buf));
    return buf;
}

// Decrypts body and strips the ICV; nullopt on ICV mismatch.
std::optional<Bytes> decrypt_fragment(const crypto::WepSeed& seed, ByteView body) {
    crypto::Rc4State rc4(seed);
    Bytes plain = rc4.apply(body);
    const std::size_t n = plain.size() - kIcvBytes;
    if (crypto::crc32(ByteView(plain.data(), n)) != load_le32(plain.data() + n)) return std::nullopt;
    plain.resize(n);
    return plain;
}

const crypto::Ttak& cached_phase1(const SessionKeys& keys, std::uint32_t high32, std::optional<std::uint32_t>& cached_high32,
                                  std::optional<crypto::Ttak>& cached_ttak, std::uint64_t& runs) {
    if (!cached_ttak || cached_high32 != high32) {
        cached_ttak = crypto::phase1_mix(keys.tk, keys.ta, high32);
        cached_high32 = high32;
        ++runs;
    }
    return *cached_ttak;
}

struct Fragment {
    ParsedHeader header;
    Tsc48 tsc;
    ByteView body;
};

enum class Protocol { Tkip, Lotkip };

// Shared receive pipeline. receiver is null for baseline TKIP.
Result<Bytes> open_msdu(Protocol protocol, const SessionKeys& keys, LotkipReceiverState* receiver,
                        std::span<const Bytes> frames, ReplayWindow& window, CountermeasureState& cm,
                        const Clock& clock, const MsduAddressing& addr) {
    const Millis now = clock.now();
    if (cm.blocked(now)) return CodecError::Blackout;
    if (frames.empty()) return CodecError::Malformed;

    std::vector<Fragment> frags;
    frags.reserve(frames.size());
    for (std::size_t k = 0; k < frames.size(); ++k) {
        auto parsed = parse_header(frames[k]);
        if (!parsed) return parsed.error();
        const ParsedHeader& h = parsed.value();
        const bool last = k + 1 == frames.size();
        if (h.key_id != keys.key_id || h.more_fragments == last) return CodecError::Malformed;
        if (frames[k].size() < h.header_size + kIcvBytes) return CodecError::Malformed;
        if (protocol == Protocol::Tkip && h.layout != FrameLayout::TkipBaseline) return CodecError::Malformed;
        if (protocol == Protocol::Lotkip) {
            if (h.layout == FrameLayout::TkipBaseline) return CodecError::Malformed;
            if (h.layout == FrameLayout::Probe && frames.size() != 1) return CodecError::Malformed;
        }
        frags.push_back({h, Tsc48{}, ByteView(frames[k]).subspan(h.header_size)});
    }

    // Resolve full TSCs. A type-B frame inherits the epoch of the nearest
    // type-A frame (earlier in this MSDU, or accepted before).
    bool have_epoch = receiver && receiver->epoch_high32.has_value();
    std::uint32_t epoch = have_epoch ? *receiver->epoch_high32 : 0;
    std::optional<Tsc48> reference = window.highest();
    for (auto& f : frags) {
        std::uint32_t high = 0;
        if (f.header.tsc_high32) {
            high = *f.header.tsc_high32;
        } else {
            if (!have_epoch) return CodecError::NoEpochState;
            high = epoch;
            if (reference && reference->high32() == high && f.header.tsc_low16 < reference->low16() &&
                reference->low16() - f.header.tsc_low16 > 0x8000) {
                if (high == UINT32_MAX) return CodecError::RekeyRequired;
                ++high;
            }
        }
        epoch = high;
        have_epoch = true;
        f.tsc = Tsc48::from_parts(high, f.header.tsc_low16);
        reference = f.tsc;
    }

    ReplayWindow trial = window;
    for (const auto& f : frags) {
        if (replay_classify(trial, f.tsc) == ReplayVerdict::Reject) return CodecError::ReplayRejected;
    }

    Bytes stream;
    for (const auto& f : frags) {
        crypto::WepSeed seed;
        if (receiver) {
            const auto& ttak = cached_phase1(keys, f.tsc.high32(), receiver->cached_high32, receiver->cached_ttak,
                                             receiver->phase1_runs);
            seed = crypto::phase2_mix(ttak, keys.tk, f.tsc.low16());
        } else {
            seed = crypto::mix_key(keys.tk, keys.ta, f.tsc);
        }
        auto plain = decrypt_fragment(seed, f.body);
        if (!plain) return CodecError::IcvMismatch;
        stream.insert(stream.end(), plain->begin(), plain->end());
    }

    if (frags.front().header.layout == FrameLayout::Probe) {
        if (stream != Bytes(kProbePadBytes, 0)) return CodecError::Malformed;
        window = std::move(trial);
        receiver->epoch_high32 = frags.front().tsc.high32();
        return Bytes{};
    }

    if (stream.size() < kMicBytes) return CodecError::Malformed;
    const std::size_t msdu_len = stream.size() - kMicBytes;
    const ByteView msdu(stream.data(), msdu_len);

    crypto::MicHeader mic_header{addr.sa, addr.da, addr.priority, std::nullopt};
    if (protocol == Protocol::Lotkip) mic_header.iv = frags.front().tsc;
    const auto expected = crypto::michael_mic(keys.mic_key_rx, mic_header, msdu);
    if (!std::equal(expected.begin(), expected.end(), stream.begin() + static_cast<std::ptrdiff_t>(msdu_len))) {
        cm.record_mic_failure(now);
        return CodecError::MicFailure;
    }

    window = std::move(trial);
    if (receiver) receiver->epoch_high32 = frags.back().tsc.high32();
    stream.resize(msdu_len);
    return stream;
}

}  // namespace

Bytes MpduFrame::header() const {
    Bytes h;
    h.reserve(header_size());
    h.push_back(tsc.byte(1));
    h.push_back(static_cast<std::uint8_t>((tsc.byte(1) | 0x20) & 0x7F));
    h.push_back(tsc.byte(0));
    h.push_back(static_cast<std::uint8_t>((key_id << 6) | layout_bits(layout) |
                                          (more_fragments ? kMoreFragmentsBit : 0)));
    if (has_ext_iv()) {
        for (unsigned k = 2; k < 6; ++k) h.push_back(tsc.byte(k));
    }
    return h;
}

Bytes MpduFrame::serialize() const {
    Bytes out = header();
    out.insert(out.end(), body.begin(), body.end());
    return out;
}

Result<ParsedHeader> parse_header(ByteView frame) {
    if (frame.size() < kIvKeyIdBytes) return CodecError::Malformed;
    const std::uint8_t flags = frame[3];
    if ((flags & kReservedBits) != 0) return CodecError::Malformed;
    if (frame[1] != ((frame[0] | 0x20) & 0x7F)) return CodecError::Malformed;
    const auto layout = layout_from_bits(flags);
    if (!layout) return CodecError::Malformed;

    ParsedHeader h;
    h.layout = *layout;
    h.key_id = static_cast<std::uint8_t>(flags >> 6);
    h.more_fragments = (flags & kMoreFragmentsBit) != 0;
    h.tsc_low16 = static_cast<std::uint16_t>((frame[0] << 8) | frame[2]);
    h.header_size = kIvKeyIdBytes;
    if (flags & kExtIvBit) {
        if (frame.size() < kIvKeyIdBytes + kExtIvBytes) return CodecError::Malformed;
        h.tsc_high32 = load_le32(frame.data() + 4);
        h.header_size += kExtIvBytes;
    }
    if (h.layout == FrameLayout::Probe && h.more_fragments) return CodecError::Malformed;
    return h;
}

OverheadLedger overhead_of(FrameLayout layout) {
    switch (layout) {
        case FrameLayout::TkipBaseline:
        case FrameLayout::LotkipTypeA: return {kIvKeyIdBytes, kExtIvBytes, kMicBytes, kIcvBytes};
        case FrameLayout::LotkipTypeB: return {kIvKeyIdBytes, 0, kMicBytes, kIcvBytes};
        case FrameLayout::Probe: return {kIvKeyIdBytes, kExtIvBytes, 0, kIcvBytes};
    }
    return {};
}

Result<std::vector<MpduFrame>> tkip_seal(const SessionKeys& keys, Tsc48& next_tsc, const MsduAddressing& addr,
                                         ByteView msdu, std::size_t frag_threshold) {
    if (auto err = check_seal_args(keys, msdu, frag_threshold)) return *err;
    const Bytes stream = with_mic(msdu, crypto::michael_mic(keys.mic_key_tx, {addr.sa, addr.da, addr.priority, {}}, msdu));
    const std::size_t n = fragment_count(stream.size(), frag_threshold);
    if (!tsc_space_left(next_tsc, n)) return CodecError::RekeyRequired;

    std::vector<MpduFrame> frames;
    frames.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Tsc48 tsc(next_tsc.value() + k);
        const std::size_t offset = k * frag_threshold;
        const ByteView chunk(stream.data() + offset, std::min(frag_threshold, stream.size() - offset));
        MpduFrame f;
        f.layout = FrameLayout::TkipBaseline;
        f.key_id = keys.key_id;
        f.more_fragments = k + 1 < n;
        f.tsc = tsc;
        f.body = encrypt_fragment(crypto::mix_key(keys.tk, keys.ta, tsc), chunk);
        frames.push_back(std::move(f));
    }
    next_tsc = Tsc48(next_tsc.value() + n);
    return frames;
}

Result<Bytes> tkip_open(const SessionKeys& keys, std::span<const Bytes> fragments, ReplayWindow& window,
                        CountermeasureState& countermeasures, const Clock& clock, const MsduAddressing& addr) {
    return open_msdu(Protocol::Tkip, keys, nullptr, fragments, window, countermeasures, clock, addr);
}

LotkipSenderState::LotkipSenderState(std::uint32_t k, Tsc48 first_tsc) : refresh_interval(k), next_tsc(first_tsc) {
    if (k == 0) throw std::invalid_argument("LOTKIP refresh interval must be positive");
}

Result<std::vector<MpduFrame>> lotkip_seal(const SessionKeys& keys, LotkipSenderState& sender,
                                           const MsduAddressing& addr, ByteView msdu, std::size_t frag_threshold) {
    if (sender.mode == SenderMode::Probing) return CodecError::SenderProbing;
    if (auto err = check_seal_args(keys, msdu, frag_threshold)) return *err;

    const Tsc48 first = sender.next_tsc;
    const crypto::MicHeader mic_header{addr.sa, addr.da, addr.priority, first};
    const Bytes stream = with_mic(msdu, crypto::michael_mic(keys.mic_key_tx, mic_header, msdu));
    const std::size_t n = fragment_count(stream.size(), frag_threshold);
    if (!tsc_space_left(first, n)) return CodecError::RekeyRequired;

    std::vector<MpduFrame> frames;
    frames.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Tsc48 tsc(first.value() + k);
        const bool new_epoch = sender.cached_high32 != tsc.high32();
        const bool type_a = sender.mode == SenderMode::Initial || new_epoch ||
                            sender.packets_since_refresh >= sender.refresh_interval;
        const auto& ttak =
            cached_phase1(keys, tsc.high32(), sender.cached_high32, sender.cached_ttak, sender.phase1_runs);
        if (type_a) {
            sender.packets_since_refresh = 0;
            sender.mode = SenderMode::Streaming;
        }
        ++sender.packets_since_refresh;

        const std::size_t offset = k * frag_threshold;
        const ByteView chunk(stream.data() + offset, std::min(frag_threshold, stream.size() - offset));
        MpduFrame f;
        f.layout = type_a ? FrameLayout::LotkipTypeA : FrameLayout::LotkipTypeB;
        f.key_id = keys.key_id;
        f.more_fragments = k + 1 < n;
        f.tsc = tsc;
        f.body = encrypt_fragment(crypto::phase2_mix(ttak, keys.tk, tsc.low16()), chunk);
        frames.push_back(std::move(f));
    }
    sender.next_tsc = Tsc48(first.value() + n);
    return frames;
}

Result<MpduFrame> lotkip_probe(const SessionKeys& keys, LotkipSenderState& sender) {
    if (keys.key_id > 3) return CodecError::Malformed;
    const Tsc48 tsc = sender.next_tsc;
    if (!tsc_space_left(tsc, 1)) return CodecError::RekeyRequired;
    const auto& ttak = cached_phase1(keys, tsc.high32(), sender.cached_high32, sender.cached_ttak, sender.phase1_runs);
    MpduFrame f;
    f.layout = FrameLayout::Probe;
    f.key_id = keys.key_id;
    f.tsc = tsc;
    f.body = encrypt_fragment(crypto::phase2_mix(ttak, keys.tk, tsc.low16()), Bytes(kProbePadBytes, 0));
    sender.next_tsc = Tsc48(tsc.value() + 1);
    return f;
}

SenderMode probe_cycle(LotkipSenderState& sender, AckEvent event) {
    switch (sender.mode) {
        case SenderMode::Initial:
        case SenderMode::Streaming:
            sender.mode = event == AckEvent::AckTimeout ? SenderMode::Probing : SenderMode::Streaming;
            break;
        case SenderMode::Probing:
            sender.mode = event == AckEvent::AckReceived ? SenderMode::Initial : SenderMode::Probing;
            break;
    }
    return sender.mode;
}

Result<Bytes> lotkip_open(const SessionKeys& keys, LotkipReceiverState& receiver, std::span<const Bytes> fragments,
                          ReplayWindow& window, CountermeasureState& countermeasures, const Clock& clock,
                          const MsduAddressing& addr) {
    return open_msdu(Protocol::Lotkip, keys, &receiver, fragments, window, countermeasures, clock, addr);
}

std::vector<std::vector<Bytes>> group_fragments(std::span<const Bytes> frames) {
    std::vector<std::vector<Bytes>> groups;
    std::vector<Bytes> current;
    for (const auto& frame : frames) {
        current.push_back(frame);
        const bool more = frame.size() >= kIvKeyIdBytes && (frame[3] & kMoreFragmentsBit) != 0;
        if (!more) {
            groups.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) groups.push_back(std::move(current));
    return groups;
}

}  // namespace lotkip::codec
