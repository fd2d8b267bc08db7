#pragma once

// Quasi unit-disk ad hoc topologies and the end-to-end energy experiment
// comparing baseline TKIP (no Phase-1 caching) against LOTKIP.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "lotkip/cost_model.hpp"

namespace lotkip::sim {

/// Portable wrapper over mt19937_64. The standard distributions are
/// implementation-defined, so sampling is done here to keep results
/// identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, std::uint64_t stream);

    std::uint64_t next_u64() { return engine_(); }
    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform01();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
    /// Uniform integer in [0, n), n > 0.
    std::uint64_t below(std::uint64_t n);

private:
    std::mt19937_64 engine_;
};

enum class Placement { Grid, Random };
enum class Scheme { TkipBaseline, Lotkip };

const char* to_string(Placement p);
const char* to_string(Scheme s);

struct TopologyConfig {
    std::size_t node_count = 49;
    double area_w = 500.0;
    double area_h = 500.0;
    Placement placement = Placement::Grid;
    double range_m = 120.0;
    double alpha = 0.75;
    std::uint64_t seed = 1;

    /// Throws std::invalid_argument.
    void validate() const;
};

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(const Point& a, const Point& b);

struct Topology {
    std::vector<Point> positions;
    std::vector<std::vector<std::size_t>> adjacency;  // sorted, symmetric

    std::size_t size() const { return positions.size(); }
    bool linked(std::size_t a, std::size_t b) const;
    std::size_t edge_count() const;
};

/// Link probability in the band alpha*R < d <= R: (R - d) / (R - alpha*R).
double link_probability(double dist, double range, double alpha);

/// Deterministic inside alpha*R, absent beyond R, one Bernoulli draw in the
/// band. Throws std::invalid_argument for a negative distance.
bool link_decide(double dist, double range, double alpha, Rng& rng);

/// Grid placement fills a ceil(sqrt(n)) lattice row-major with its corners on
/// the area corners; Random placement is i.i.d. uniform. One link decision
/// per unordered pair, in (i, j) index order.
Topology generate_topology(const TopologyConfig& cfg);
Topology generate_topology(const TopologyConfig& cfg, Rng& rng);

/// Minimum-hop path (inclusive of both ends), ties broken towards lower node
/// indices. nullopt when dst is unreachable. Throws if src == dst.
std::optional<std::vector<std::size_t>> route(const Topology& topo, std::size_t src, std::size_t dst);

struct PacketEnergy {
    double compute_uj = 0.0;
    double radio_uj = 0.0;
    double total_uj() const { return compute_uj + radio_uj; }
};

struct RadioOptions {
    bool ack_enabled = false;
    std::uint32_t ack_size = 14;
};

/// On-air bytes of one data frame: P + encapsulation overhead + MAC header/FCS.
std::uint64_t frame_bytes(Scheme scheme, std::uint32_t packet_size, bool ext_iv_on_air);

/// Energy of one end-to-end packet: encryption at the source plus
/// decryption at the destination, and tx+rx for every hop (plus the ACK
/// exchange when enabled). Forwarders do not decrypt.
PacketEnergy packet_energy(Scheme scheme, std::uint32_t packet_size, std::size_t hop_count, bool first_packet,
                           bool ext_iv_on_air, const cost::EnergyModelParams& params = {},
                           const RadioOptions& radio = {});

/// Per-node energy account in microjoules.
class EnergyLedger {
public:
    explicit EnergyLedger(std::size_t nodes) : node_uj_(nodes, 0.0) {}

    void charge(std::size_t node, double uj);

    const std::vector<double>& node_uj() const { return node_uj_; }
    std::uint64_t events() const { return events_; }
    double charged_uj() const { return charged_uj_; }
    /// Sum of per-node energies in node-index order.
    double network_uj() const;

private:
    std::vector<double> node_uj_;
    std::uint64_t events_ = 0;
    double charged_uj_ = 0.0;
};

/// Charge every event of one packet along path to ledger.
void charge_packet(EnergyLedger& ledger, const std::vector<std::size_t>& path, Scheme scheme,
                   std::uint32_t packet_size, bool first_packet, bool ext_iv_on_air,
                   const cost::EnergyModelParams& params, const RadioOptions& radio);

struct TrafficConfig {
    std::vector<std::uint32_t> packet_sizes{256, 512, 768, 1024, 1280, 1536, 1792, 2048};
    std::uint64_t packets_per_scenario = 10'000;
    std::size_t scenario_count = 100;
    std::vector<Scheme> schemes{Scheme::TkipBaseline, Scheme::Lotkip};
    std::uint32_t refresh_interval = 256;
    RadioOptions radio;
    cost::EnergyModelParams energy;
    std::uint64_t seed = 1;

    /// Throws std::invalid_argument (packet sizes must lie in [256, 2312]).
    void validate() const;
};

inline constexpr std::uint32_t kMinPacketSize = 256;
inline constexpr std::uint32_t kMaxPacketSize = 2312;
inline constexpr int kPairSamplingAttempts = 10'000;

struct SeriesPoint {
    std::uint32_t packet_size = 0;
    Scheme scheme = Scheme::TkipBaseline;
    Placement placement = Placement::Grid;
    double network_energy_j = 0.0;   // mean over scenarios
    double per_node_j = 0.0;
    std::vector<double> node_energy_j;  // mean over scenarios
    std::uint64_t events = 0;           // all scenarios
    double mean_hops = 0.0;
};

struct SimResult {
    std::vector<SeriesPoint> points;

    const SeriesPoint* find(std::uint32_t packet_size, Scheme scheme, Placement placement) const;
    /// E_baseline / E_lotkip, when both schemes were run.
    std::optional<double> efficiency_factor(std::uint32_t packet_size, Placement placement) const;
};

/// Thrown when no connected source/destination pair can be found.
class ConfigurationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Runs traffic.scenario_count scenarios for every packet size and scheme.
/// Each scenario draws a fresh topology and one connected source/destination
/// pair from seeds derived from (topology.seed, scenario index) and
/// (traffic.seed, scenario index); the same scenarios are reused across
/// packet sizes and schemes.
SimResult run_experiment(const TopologyConfig& topology, const TrafficConfig& traffic);

/// CSV with header P,scheme,placement,network_energy_J,per_node_J,efficiency_factor
/// ordered by (P, scheme, placement).
std::string emit_series(const SimResult& result);

/// Least-squares fit y = a + b x and its coefficient of determination.
struct LinearFit {
    double intercept = 0.0;
    double slope = 0.0;
    double r_squared = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Reference trend for the efficiency factor: 2.33 + 0.00028 P.
inline double reference_efficiency(double packet_size) { return 2.33 + 0.00028 * packet_size; }

}  // namespace lotkip::sim
