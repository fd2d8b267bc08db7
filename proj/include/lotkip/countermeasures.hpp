#pragma once

#include <chrono>
#include <deque>
#include <optional>

namespace lotkip::codec {

using Millis = std::chrono::milliseconds;

/// Monotonic time source injected into the receive path.
class Clock {
public:
    virtual ~Clock() = default;
    virtual Millis now() const = 0;
};

class SteadyClock final : public Clock {
public:
    Millis now() const override;
};

class ManualClock final : public Clock {
public:
    explicit ManualClock(Millis start = Millis{0}) : now_(start) {}
    Millis now() const override { return now_; }
    void set(Millis t) { now_ = t; }
    void advance(Millis d) { now_ += d; }

private:
    Millis now_;
};

inline constexpr Millis kMicFailureWindow{60'000};
inline constexpr Millis kBlackoutDuration{60'000};

/// MIC-failure countermeasures: a second failure less than a minute after the
/// previous one blocks all traffic for 60 s and raises rekey_required.
struct CountermeasureState {
    std::deque<Millis> failure_times;
    std::optional<Millis> blackout_until;
    bool rekey_required = false;

    bool blocked(Millis now) const { return blackout_until && now < *blackout_until; }

    /// Returns true when this failure started a blackout.
    bool record_mic_failure(Millis now);
};

}  // namespace lotkip::codec
