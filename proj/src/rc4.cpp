#include <numeric>
#include <utility>

#include "lotkip/tkip_crypto.hpp"

namespace lotkip::crypto {

Rc4State::Rc4State(ByteView key) {
    if (key.empty() || key.size() > 256) throw std::invalid_argument("RC4 key length must be in [1, 256]");
    std::iota(s_.begin(), s_.end(), std::uint8_t{0});
    std::uint8_t j = 0;
    for (std::size_t i = 0; i < 256; ++i) {
        j = static_cast<std::uint8_t>(j + s_[i] + key[i % key.size()]);
        std::swap(s_[i], s_[j]);
    }
}

std::uint8_t Rc4State::next() {
    ++i_;
    j_ = static_cast<std::uint8_t>(j_ + s_[i_]);
    std::swap(s_[i_], s_[j_]);
    return s_[static_cast<std::uint8_t>(s_[i_] + s_[j_])];
}

void Rc4State::apply(std::span<std::uint8_t> data) {
    for (auto& b : data) b ^= next();
}

Bytes Rc4State::apply(ByteView data) {
    Bytes out(data.begin(), data.end());
    apply(std::span<std::uint8_t>(out));
    return out;
}

Bytes rc4_apply(ByteView key, ByteView data) {
    Rc4State state(key);
    return state.apply(data);
}

}  // namespace lotkip::crypto
