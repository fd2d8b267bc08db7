#pragma once

#include <cstddef>
#include <optional>
#include <set>

#include "lotkip/tkip_crypto.hpp"

namespace lotkip::codec {

enum class ReplayVerdict { Accept, Reject, Window };

const char* to_string(ReplayVerdict v);

/// Receiver-side TSC bookkeeping: the highest TSC and the largest 16
/// accepted values.
///
///   Accept  tsc > highest (or nothing seen yet)
///   Window  min(recent) < tsc < highest and tsc not seen
///   Reject  everything else (below the window, or a duplicate)
class ReplayWindow {
public:
    static constexpr std::size_t kCapacity = 16;

    ReplayVerdict classify(crypto::Tsc48 tsc) const;

    /// Record an admitted TSC, evicting the smallest when over capacity.
    void admit(crypto::Tsc48 tsc);

    std::optional<crypto::Tsc48> highest() const;
    const std::set<std::uint64_t>& recent() const { return recent_; }
    bool empty() const { return recent_.empty(); }

private:
    std::set<std::uint64_t> recent_;
};

/// Classify and, for Accept/Window, admit.
ReplayVerdict replay_classify(ReplayWindow& window, crypto::Tsc48 tsc);

}  // namespace lotkip::codec
