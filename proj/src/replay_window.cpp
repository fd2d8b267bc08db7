#include "lotkip/replay_window.hpp"

namespace lotkip::codec {

const char* to_string(ReplayVerdict v) {
    switch (v) {
        case ReplayVerdict::Accept: return "Accept";
        case ReplayVerdict::Reject: return "Reject";
        case ReplayVerdict::Window: return "Window";
    }
    return "?";
}

ReplayVerdict ReplayWindow::classify(crypto::Tsc48 tsc) const {
    if (recent_.empty()) return ReplayVerdict::Accept;
    const std::uint64_t v = tsc.value();
    if (v > *recent_.rbegin()) return ReplayVerdict::Accept;
    if (v > *recent_.begin() && !recent_.contains(v)) return ReplayVerdict::Window;
    return ReplayVerdict::Reject;
}

void ReplayWindow::admit(crypto::Tsc48 tsc) {
    recent_.insert(tsc.value());
    while (recent_.size() > kCapacity) recent_.erase(recent_.begin());
}

std::optional<crypto::Tsc48> ReplayWindow::highest() const {
    if (recent_.empty()) return std::nullopt;
    return crypto::Tsc48(*recent_.rbegin());
}

ReplayVerdict replay_classify(ReplayWindow& window, crypto::Tsc48 tsc) {
    const ReplayVerdict verdict = window.classify(tsc);
    if (verdict != ReplayVerdict::Reject) window.admit(tsc);
    return verdict;
}

}  // namespace lotkip::codec
