#include "lotkip/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace lotkip::config {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
    T value{};
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end) throw ConfigError("bad numeric value for '" + key + "': '" + text + "'");
    return value;
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad numeric value for '" + key + "': '" + text + "'");
    }
}

bool parse_bool(const std::string& key, const std::string& text) {
    if (text == "1" || text == "true" || text == "on" || text == "yes") return true;
    if (text == "0" || text == "false" || text == "off" || text == "no") return false;
    throw ConfigError("bad boolean value for '" + key + "': '" + text + "'");
}

template <std::size_t N>
std::array<std::uint8_t, N> hex_field(const KeyValues& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("missing required key '" + key + "'");
    try {
        return fixed_from_hex<N>(it->second);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("key '" + key + "': " + e.what());
    }
}

std::string hex_of(ByteView b) { return to_hex(b); }

}  // namespace

KeyValues parse_key_values(std::istream& in, const std::vector<std::string>& allowed) {
    KeyValues kv;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        }
        if (!kv.emplace(key, value).second) {
            throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        }
    }
    return kv;
}

KeyValues read_key_values(const std::string& path, const std::vector<std::string>& allowed) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return parse_key_values(in, allowed);
    } catch (const ConfigError& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

const char* to_string(Mode mode) { return mode == Mode::Tkip ? "tkip" : "lotkip"; }

Mode parse_mode(const std::string& text) {
    if (text == "tkip") return Mode::Tkip;
    if (text == "lotkip") return Mode::Lotkip;
    throw ConfigError("mode must be tkip or lotkip, got '" + text + "'");
}

SessionConfig session_from(const KeyValues& kv) {
    SessionConfig cfg;
    cfg.keys.tk.bytes = hex_field<16>(kv, "tk");
    cfg.keys.mic_key_tx = crypto::MichaelKey::from_bytes(hex_field<8>(kv, "mic_key_tx"));
    cfg.keys.mic_key_rx = crypto::MichaelKey::from_bytes(hex_field<8>(kv, "mic_key_rx"));
    cfg.keys.ta.bytes = hex_field<6>(kv, "ta");

    if (auto it = kv.find("key_id"); it != kv.end()) {
        const auto id = parse_number<unsigned>("key_id", it->second);
        if (id > 3) throw ConfigError("key_id must be in 0..3");
        cfg.keys.key_id = static_cast<std::uint8_t>(id);
    }
    if (auto it = kv.find("mode"); it != kv.end()) cfg.mode = parse_mode(it->second);
    if (auto it = kv.find("K"); it != kv.end()) {
        cfg.refresh_interval = parse_number<std::uint32_t>("K", it->second);
        if (cfg.refresh_interval == 0) throw ConfigError("K must be positive");
    }
    if (auto it = kv.find("frag_threshold"); it != kv.end()) {
        cfg.frag_threshold = parse_number<std::size_t>("frag_threshold", it->second);
        if (cfg.frag_threshold < codec::kMinFragThreshold || cfg.frag_threshold > codec::kMaxFragThreshold) {
            throw ConfigError("frag_threshold must be in [256, 2346]");
        }
    }

    cfg.addressing.sa = cfg.keys.ta;
    cfg.addressing.da.bytes.fill(0xFF);
    if (kv.contains("sa")) cfg.addressing.sa.bytes = hex_field<6>(kv, "sa");
    if (kv.contains("da")) cfg.addressing.da.bytes = hex_field<6>(kv, "da");
    if (auto it = kv.find("priority"); it != kv.end()) {
        const auto prio = parse_number<unsigned>("priority", it->second);
        if (prio > 255) throw ConfigError("priority must fit in one byte");
        cfg.addressing.priority = static_cast<std::uint8_t>(prio);
    }
    return cfg;
}

SessionConfig load_session(const std::string& path) {
    static const std::vector<std::string> kAllowed{"tk", "mic_key_tx", "mic_key_rx", "ta", "key_id", "mode",
                                                   "K", "frag_threshold", "sa", "da", "priority"};
    try {
        return session_from(read_key_values(path, kAllowed));
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(e.what()).starts_with(path) ? e.what() : path + ": " + e.what());
    }
}

std::string describe(const SessionConfig& cfg) {
    std::ostringstream out;
    out << "mode=" << to_string(cfg.mode) << " key_id=" << int(cfg.keys.key_id) << " K=" << cfg.refresh_interval
        << " frag_threshold=" << cfg.frag_threshold << " ta=" << hex_of(cfg.keys.ta.bytes)
        << " sa=" << hex_of(cfg.addressing.sa.bytes) << " da=" << hex_of(cfg.addressing.da.bytes)
        << " priority=" << int(cfg.addressing.priority);
    return out.str();
}

std::vector<sim::Placement> parse_placements(const std::string& text) {
    if (text == "grid") return {sim::Placement::Grid};
    if (text == "random") return {sim::Placement::Random};
    if (text == "both") return {sim::Placement::Grid, sim::Placement::Random};
    throw ConfigError("placement must be grid, random or both, got '" + text + "'");
}

std::vector<sim::Scheme> parse_schemes(const std::string& text) {
    if (text == "tkip") return {sim::Scheme::TkipBaseline};
    if (text == "lotkip") return {sim::Scheme::Lotkip};
    if (text == "both") return {sim::Scheme::TkipBaseline, sim::Scheme::Lotkip};
    throw ConfigError("scheme must be tkip, lotkip or both, got '" + text + "'");
}

ScenarioConfig scenario_from(const KeyValues& kv) {
    ScenarioConfig cfg;
    auto& t = cfg.topology;
    auto& tr = cfg.traffic;
    for (const auto& [key, value] : kv) {
        if (key == "nodes") t.node_count = parse_number<std::size_t>(key, value);
        else if (key == "area_w") t.area_w = parse_double(key, value);
        else if (key == "area_h") t.area_h = parse_double(key, value);
        else if (key == "placement") cfg.placements = parse_placements(value);
        else if (key == "R") t.range_m = parse_double(key, value);
        else if (key == "alpha") t.alpha = parse_double(key, value);
        else if (key == "packets") tr.packets_per_scenario = parse_number<std::uint64_t>(key, value);
        else if (key == "scenarios") tr.scenario_count = parse_number<std::size_t>(key, value);
        else if (key == "scheme") tr.schemes = parse_schemes(value);
        else if (key == "K") tr.refresh_interval = parse_number<std::uint32_t>(key, value);
        else if (key == "ack") tr.radio.ack_enabled = parse_bool(key, value);
        else if (key == "seed") {
            t.seed = parse_number<std::uint64_t>(key, value);
            tr.seed = t.seed;
        } else if (key == "P_list") {
            tr.packet_sizes.clear();
            std::stringstream ss(value);
            std::string item;
            while (std::getline(ss, item, ',')) tr.packet_sizes.push_back(parse_number<std::uint32_t>(key, trim(item)));
        }
    }
    try {
        t.validate();
        tr.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    static const std::vector<std::string> kAllowed{"nodes", "area_w", "area_h", "placement", "R",    "alpha", "P_list",
                                                   "packets", "scenarios", "scheme", "K", "ack", "seed"};
    try {
        return scenario_from(read_key_values(path, kAllowed));
    } catch (const ConfigError& e) {
        throw ConfigError(std::string(e.what()).starts_with(path) ? e.what() : path + ": " + e.what());
    }
}

std::string describe(const ScenarioConfig& cfg) {
    std::ostringstream out;
    const auto& t = cfg.topology;
    const auto& tr = cfg.traffic;
    out << "nodes=" << t.node_count << " area=" << t.area_w << "x" << t.area_h << " placement=";
    for (std::size_t i = 0; i < cfg.placements.size(); ++i) out << (i ? "," : "") << sim::to_string(cfg.placements[i]);
    out << " R=" << t.range_m << " alpha=" << t.alpha << " P_list=";
    for (std::size_t i = 0; i < tr.packet_sizes.size(); ++i) out << (i ? "," : "") << tr.packet_sizes[i];
    out << " packets=" << tr.packets_per_scenario << " scenarios=" << tr.scenario_count << " scheme=";
    for (std::size_t i = 0; i < tr.schemes.size(); ++i) out << (i ? "," : "") << sim::to_string(tr.schemes[i]);
    out << " K=" << tr.refresh_interval << " ack=" << (tr.radio.ack_enabled ? 1 : 0) << " seed=" << t.seed;
    return out.str();
}

}  // namespace lotkip::config
