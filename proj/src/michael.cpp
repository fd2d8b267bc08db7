#include <bit>

#include "lotkip/tkip_crypto.hpp"

namespace lotkip::crypto {

MichaelKey MichaelKey::from_bytes(std::span<const std::uint8_t, 8> raw) {
    return MichaelKey{load_le32(raw.data()), load_le32(raw.data() + 4)};
}

std::array<std::uint8_t, 8> MichaelKey::to_bytes() const {
    std::array<std::uint8_t, 8> out{};
    store_le32(out.data(), k0);
    store_le32(out.data() + 4, k1);
    return out;
}

namespace {

// Exchange the upper and lower 16-bit halves.
constexpr std::uint32_t xswap(std::uint32_t v) { return std::rotl(v, 16); }

}  // namespace

MichaelState michael_block(MichaelState st) {
    std::uint32_t l = st.l;
    std::uint32_t r = st.r;
    r ^= std::rotl(l, 17);
    l += r;
    r ^= xswap(l);
    l += r;
    r ^= std::rotl(l, 3);
    l += r;
    r ^= std::rotr(l, 2);
    l += r;
    return {l, r};
}

std::vector<std::uint32_t> michael_pad(ByteView message) {
    // 0x5A plus at least four zero bytes, rounded up to a whole word.
    Bytes padded(message.begin(), message.end());
    padded.push_back(0x5A);
    padded.insert(padded.end(), 4, 0);
    while (padded.size() % 4 != 0) padded.push_back(0);

    std::vector<std::uint32_t> words(padded.size() / 4);
    for (std::size_t w = 0; w < words.size(); ++w) words[w] = load_le32(padded.data() + 4 * w);
    return words;
}

MicTag michael(const MichaelKey& key, ByteView message) {
    MichaelState st{key.k0, key.k1};
    for (std::uint32_t word : michael_pad(message)) {
        st.l ^= word;
        st = michael_block(st);
    }
    MicTag tag{};
    store_le32(tag.data(), st.l);
    store_le32(tag.data() + 4, st.r);
    return tag;
}

MicTag michael_mic(const MichaelKey& key, const MicHeader& header, ByteView data) {
    Bytes message;
    message.reserve(22 + data.size());
    message.insert(message.end(), header.sa.bytes.begin(), header.sa.bytes.end());
    message.insert(message.end(), header.da.bytes.begin(), header.da.bytes.end());
    message.push_back(header.priority);
    message.insert(message.end(), 3, 0);
    if (header.iv) {
        const auto iv = header.iv->to_bytes();
        message.insert(message.end(), iv.begin(), iv.end());
    }
    message.insert(message.end(), data.begin(), data.end());
    return michael(key, message);
}

}  // namespace lotkip::crypto
