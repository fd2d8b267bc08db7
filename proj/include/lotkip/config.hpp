#pragma once

// Plain-text key=value configuration files.
//
// Session file (one station's view of a link):
//   tk, mic_key_tx, mic_key_rx, ta, key_id, mode={tkip,lotkip}, K, frag_threshold
//   optional: sa, da (default: sa = ta, da = ff:ff:ff:ff:ff:ff), priority
//
// Scenario file:
//   nodes, area_w, area_h, placement={grid,random,both}, R, alpha, P_list,
//   packets, scenarios, scheme={tkip,lotkip,both}, K, ack, seed
//
// '#' starts a comment; blank lines are ignored; unknown keys are errors.

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "lotkip/frame_codec.hpp"
#include "lotkip/netsim.hpp"

namespace lotkip::config {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using KeyValues = std::map<std::string, std::string>;

/// Throws ConfigError on syntax errors, duplicate keys or keys outside allowed.
KeyValues parse_key_values(std::istream& in, const std::vector<std::string>& allowed);
KeyValues read_key_values(const std::string& path, const std::vector<std::string>& allowed);

enum class Mode { Tkip, Lotkip };

const char* to_string(Mode mode);
Mode parse_mode(const std::string& text);

struct SessionConfig {
    codec::SessionKeys keys;
    codec::MsduAddressing addressing;
    Mode mode = Mode::Tkip;
    std::uint32_t refresh_interval = codec::kDefaultRefreshInterval;
    std::size_t frag_threshold = codec::kMaxFragThreshold;
};

SessionConfig session_from(const KeyValues& kv);
SessionConfig load_session(const std::string& path);
std::string describe(const SessionConfig& cfg);

struct ScenarioConfig {
    sim::TopologyConfig topology;
    sim::TrafficConfig traffic;
    std::vector<sim::Placement> placements{sim::Placement::Grid, sim::Placement::Random};
};

ScenarioConfig scenario_from(const KeyValues& kv);
ScenarioConfig load_scenario(const std::string& path);
std::string describe(const ScenarioConfig& cfg);

std::vector<sim::Placement> parse_placements(const std::string& text);
std::vector<sim::Scheme> parse_schemes(const std::string& text);

}  // namespace lotkip::config
