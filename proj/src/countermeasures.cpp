#include "lotkip/countermeasures.hpp"

namespace lotkip::codec {

Millis SteadyClock::now() const {
    return std::chrono::duration_cast<Millis>(std::chrono::steady_clock::now().time_since_epoch());
}

bool CountermeasureState::record_mic_failure(Millis now) {
    while (!failure_times.empty() && now - failure_times.front() >= kMicFailureWindow) failure_times.pop_front();
    const bool trigger = !failure_times.empty();
    failure_times.push_back(now);
    if (trigger) {
        blackout_until = now + kBlackoutDuration;
        rekey_required = true;
    }
    return trigger;
}

}  // namespace lotkip::codec
