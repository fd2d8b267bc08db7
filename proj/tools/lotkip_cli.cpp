// lotkip: seal/open byte streams, Table 1, energy formulas, simulations and
// golden-vector checks.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lotkip/config.hpp"
#include "lotkip/cost_model.hpp"
#include "lotkip/frame_codec.hpp"
#include "lotkip/netsim.hpp"
#include "lotkip/vectors.hpp"

namespace {

using namespace lotkip;

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

Bytes read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, const Bytes& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("write to '" + path + "' failed");
}

// "-" or empty means standard output.
void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        if (!std::cout) throw IoError("write to standard output failed");
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("write to '" + path + "' failed");
}

// Container: per frame a 4-byte big-endian length, then the frame.
void append_frame(Bytes& container, const Bytes& frame) {
    const auto n = static_cast<std::uint32_t>(frame.size());
    for (int shift = 24; shift >= 0; shift -= 8) container.push_back(static_cast<std::uint8_t>(n >> shift));
    container.insert(container.end(), frame.begin(), frame.end());
}

std::optional<std::vector<Bytes>> split_container(const Bytes& container) {
    std::vector<Bytes> frames;
    std::size_t pos = 0;
    while (pos < container.size()) {
        if (container.size() - pos < 4) return std::nullopt;
        const std::uint32_t n = (std::uint32_t{container[pos]} << 24) | (std::uint32_t{container[pos + 1]} << 16) |
                                (std::uint32_t{container[pos + 2]} << 8) | std::uint32_t{container[pos + 3]};
        pos += 4;
        if (container.size() - pos < n) return std::nullopt;
        frames.emplace_back(container.begin() + static_cast<std::ptrdiff_t>(pos),
                            container.begin() + static_cast<std::ptrdiff_t>(pos + n));
        pos += n;
    }
    return frames;
}

struct SessionArgs {
    std::string config;
    std::string in;
    std::string out;
    std::string mode;
    std::size_t msdu_size = codec::kMaxMsduBytes;
};

config::SessionConfig resolve_session(const SessionArgs& args) {
    auto cfg = config::load_session(args.config);
    if (!args.mode.empty()) cfg.mode = config::parse_mode(args.mode);
    std::cerr << "config: " << config::describe(cfg) << "\n";
    return cfg;
}

int cmd_seal(const SessionArgs& args) {
    const auto cfg = resolve_session(args);
    if (args.msdu_size == 0 || args.msdu_size > codec::kMaxMsduBytes) {
        std::cerr << "error: --msdu-size must be in [1, " << codec::kMaxMsduBytes << "]\n";
        return 2;
    }
    const Bytes input = read_file(args.in);
    Bytes container;
    crypto::Tsc48 tkip_tsc;
    codec::LotkipSenderState sender(cfg.refresh_interval);
    std::size_t frames = 0;
    for (std::size_t offset = 0; offset < input.size(); offset += args.msdu_size) {
        const ByteView msdu(input.data() + offset, std::min(args.msdu_size, input.size() - offset));
        auto sealed = cfg.mode == config::Mode::Tkip
                          ? codec::tkip_seal(cfg.keys, tkip_tsc, cfg.addressing, msdu, cfg.frag_threshold)
                          : codec::lotkip_seal(cfg.keys, sender, cfg.addressing, msdu, cfg.frag_threshold);
        if (!sealed) {
            std::cerr << "error: seal failed: " << codec::to_string(sealed.error()) << "\n";
            return 1;
        }
        for (const auto& f : sealed.value()) {
            append_frame(container, f.serialize());
            ++frames;
        }
    }
    write_file(args.out, container);
    std::cerr << "sealed " << input.size() << " bytes into " << frames << " frames\n";
    return 0;
}

int cmd_open(const SessionArgs& args) {
    const auto cfg = resolve_session(args);
    const auto frames = split_container(read_file(args.in));
    if (!frames) {
        std::cerr << "error: Malformed: truncated container\n";
        return 1;
    }
    codec::ReplayWindow window;
    codec::CountermeasureState cm;
    codec::SteadyClock clock;
    codec::LotkipReceiverState receiver;
    Bytes output;
    std::size_t index = 0;
    for (const auto& group : codec::group_fragments(*frames)) {
        auto opened = cfg.mode == config::Mode::Tkip
                          ? codec::tkip_open(cfg.keys, group, window, cm, clock, cfg.addressing)
                          : codec::lotkip_open(cfg.keys, receiver, group, window, cm, clock, cfg.addressing);
        if (!opened) {
            std::cerr << "error: " << codec::to_string(opened.error()) << " at frame " << index << "\n";
            return 1;
        }
        const Bytes& msdu = opened.value();
        output.insert(output.end(), msdu.begin(), msdu.end());
        index += group.size();
    }
    write_file(args.out, output);
    std::cerr << "opened " << index << " frames, " << output.size() << " bytes\n";
    return 0;
}

int cmd_table1(const std::string& csv) {
    std::cerr << "config: table1 m=16..128 step 16, unit weights\n";
    write_text(csv, cost::table1_csv(cost::table1()));
    for (const auto& d : cost::table1_deviations()) {
        std::cerr << "note: m=" << d.m << " " << d.column << " formula=" << d.formula
                  << " published=" << d.published << " (difference " << (d.formula - d.published) << ")\n";
    }
    return 0;
}

struct EnergyArgs {
    std::uint64_t m = 256;
    int keymix_case = 1;
    bool later_packet = false;
    std::optional<std::uint64_t> frame_bytes;
    std::optional<std::size_t> hops;
    bool ack = false;
};

int cmd_energy(const EnergyArgs& args) {
    const auto mode = args.keymix_case == 1 ? cost::KeyMixCase::NoCache : cost::KeyMixCase::Cache;
    const bool first = !args.later_packet;
    std::cerr << "config: m=" << args.m << " case=" << args.keymix_case << " first_packet=" << (first ? 1 : 0)
              << " cycle_energy_uJ=" << cost::EnergyModelParams{}.cycle_energy_uj << "\n";
    std::ostringstream out;
    char buf[64];
    out << "tkip_energy_cycles=" << cost::tkip_energy_cycles(args.m, mode, first) << "\n";
    std::snprintf(buf, sizeof buf, "%.4f", cost::tkip_energy_uj(args.m, mode, first));
    out << "tkip_energy_uJ=" << buf << "\n";
    if (args.m > 0) out << "tkip_cycles_table=" << cost::tkip_cycles(args.m, mode) << "\n";
    if (args.frame_bytes) {
        std::snprintf(buf, sizeof buf, "%.4f", cost::tx_energy_uj(*args.frame_bytes));
        out << "tx_energy_uJ=" << buf << "\n";
        std::snprintf(buf, sizeof buf, "%.4f", cost::rx_energy_uj(*args.frame_bytes));
        out << "rx_energy_uJ=" << buf << "\n";
    }
    if (args.hops) {
        const auto scheme = args.keymix_case == 1 ? sim::Scheme::TkipBaseline : sim::Scheme::Lotkip;
        const bool ext_iv = scheme == sim::Scheme::TkipBaseline || first;
        sim::RadioOptions radio;
        radio.ack_enabled = args.ack;
        const auto e = sim::packet_energy(scheme, static_cast<std::uint32_t>(args.m), *args.hops, first, ext_iv, {},
                                          radio);
        out << "frame_bytes=" << sim::frame_bytes(scheme, static_cast<std::uint32_t>(args.m), ext_iv) << "\n";
        std::snprintf(buf, sizeof buf, "%.4f", e.total_uj());
        out << "packet_energy_uJ=" << buf << "\n";
    }
    write_text("-", out.str());
    return 0;
}

struct SimArgs {
    std::string scenario;
    std::string csv;
    std::optional<std::uint64_t> seed;
    std::string scheme;
    std::string placement;
    std::optional<double> range;
    std::optional<double> alpha;
    std::optional<std::size_t> scenarios;
    std::optional<std::uint64_t> packets;
};

int cmd_sim(const SimArgs& args) {
    config::ScenarioConfig cfg;
    if (!args.scenario.empty()) cfg = config::load_scenario(args.scenario);
    if (args.seed) cfg.topology.seed = cfg.traffic.seed = *args.seed;
    if (!args.scheme.empty()) cfg.traffic.schemes = config::parse_schemes(args.scheme);
    if (!args.placement.empty()) cfg.placements = config::parse_placements(args.placement);
    if (args.range) cfg.topology.range_m = *args.range;
    if (args.alpha) cfg.topology.alpha = *args.alpha;
    if (args.scenarios) cfg.traffic.scenario_count = *args.scenarios;
    if (args.packets) cfg.traffic.packets_per_scenario = *args.packets;
    try {
        cfg.topology.validate();
        cfg.traffic.validate();
    } catch (const std::invalid_argument& e) {
        throw config::ConfigError(e.what());
    }
    std::cerr << "config: " << config::describe(cfg) << "\n";

    sim::SimResult merged;
    for (const auto placement : cfg.placements) {
        auto topo = cfg.topology;
        topo.placement = placement;
        auto part = sim::run_experiment(topo, cfg.traffic);
        merged.points.insert(merged.points.end(), part.points.begin(), part.points.end());
    }
    write_text(args.csv, sim::emit_series(merged));
    return 0;
}

int cmd_vectors(const std::string& dir) {
    std::cerr << "config: dir=" << dir << "\n";
    bool ok = true;
    std::ostringstream out;
    for (const auto& r : vectors::check_directory(dir)) {
        out << r.name << ": ";
        if (r.missing) {
            out << "MISSING\n";
        } else {
            out << r.cases << " cases, " << r.mismatches << " mismatches\n";
        }
        for (const auto& msg : r.first_failures) std::cerr << r.name << " " << msg << "\n";
        ok = ok && r.passed();
    }
    write_text("-", out.str());
    if (!ok) std::cerr << "error: golden vector check failed\n";
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"TKIP / LOTKIP codec, cost model and energy simulator"};
    app.require_subcommand(1);

    SessionArgs seal_args;
    auto* seal = app.add_subcommand("seal", "Encrypt a file of MSDU bytes into a framed container");
    SessionArgs open_args;
    auto* open = app.add_subcommand("open", "Verify and decrypt a framed container");
    for (auto [cmd, a] : {std::pair{seal, &seal_args}, std::pair{open, &open_args}}) {
        cmd->add_option("--config", a->config, "Session config file")->required()->check(CLI::ExistingFile);
        cmd->add_option("--in", a->in, "Input file")->required();
        cmd->add_option("--out", a->out, "Output file")->required();
        cmd->add_option("--mode", a->mode, "Override the config mode")->check(CLI::IsMember({"tkip", "lotkip"}));
    }
    seal->add_option("--msdu-size", seal_args.msdu_size, "Bytes per MSDU when splitting the input");

    std::string table1_csv;
    auto* table1 = app.add_subcommand("table1", "Write the per-function cycle table as CSV");
    table1->add_option("--csv", table1_csv, "Output path (default: standard output)");

    EnergyArgs energy_args;
    auto* energy = app.add_subcommand("energy", "Evaluate the energy formulas");
    energy->add_option("--m", energy_args.m, "Message size in bytes");
    energy->add_option("--case", energy_args.keymix_case, "1: no TTAK cache, 2: cached")->check(CLI::IsMember({1, 2}));
    energy->add_flag("--later", energy_args.later_packet, "Not the first packet of an epoch (case 2 only)");
    energy->add_option("--frame-bytes", energy_args.frame_bytes, "Also print tx/rx energy for this frame size");
    energy->add_option("--hops", energy_args.hops, "Also print end-to-end packet energy over this many hops");
    energy->add_flag("--ack", energy_args.ack, "Include ACK energy per hop");

    SimArgs sim_args;
    auto* simc = app.add_subcommand("sim", "Run the network energy simulation");
    simc->add_option("--scenario", sim_args.scenario, "Scenario config file")->check(CLI::ExistingFile);
    simc->add_option("--csv", sim_args.csv, "Output path (default: standard output)");
    simc->add_option("--seed", sim_args.seed, "Topology and traffic seed");
    simc->add_option("--scheme", sim_args.scheme)->check(CLI::IsMember({"tkip", "lotkip", "both"}));
    simc->add_option("--placement", sim_args.placement)->check(CLI::IsMember({"grid", "random", "both"}));
    simc->add_option("--R", sim_args.range, "Radio range in metres");
    simc->add_option("--alpha", sim_args.alpha, "Inner-disk fraction of R");
    simc->add_option("--scenarios", sim_args.scenarios, "Scenarios per placement");
    simc->add_option("--packets", sim_args.packets, "Packets per scenario");

    std::string vectors_dir = "vectors";
    auto* vec = app.add_subcommand("vectors", "Check the crypto primitives against the golden vector files");
    vec->add_option("--dir", vectors_dir, "Directory holding the vector files");

    CLI11_PARSE(app, argc, argv);

    try {
        if (seal->parsed()) return cmd_seal(seal_args);
        if (open->parsed()) return cmd_open(open_args);
        if (table1->parsed()) return cmd_table1(table1_csv);
        if (energy->parsed()) return cmd_energy(energy_args);
        if (simc->parsed()) return cmd_sim(sim_args);
        if (vec->parsed()) return cmd_vectors(vectors_dir);
    } catch (const config::ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
