#include "lotkip/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <sstream>
#include <tuple>

#include "lotkip/frame_codec.hpp"

namespace lotkip::sim {

Rng::Rng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

double Rng::uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below needs n > 0");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do {
        v = engine_();
    } while (v >= limit);
    return v % n;
}

const char* to_string(Placement p) { return p == Placement::Grid ? "grid" : "random"; }
const char* to_string(Scheme s) { return s == Scheme::TkipBaseline ? "tkip" : "lotkip"; }

void TopologyConfig::validate() const {
    if (node_count < 2) throw std::invalid_argument("topology needs at least 2 nodes");
    if (!(area_w > 0.0) || !(area_h > 0.0)) throw std::invalid_argument("area dimensions must be positive");
    if (!(range_m > 0.0)) throw std::invalid_argument("range R must be positive");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("alpha must lie in [0, 1]");
}

double distance(const Point& a, const Point& b) { return std::hypot(a.x - b.x, a.y - b.y); }

bool Topology::linked(std::size_t a, std::size_t b) const {
    const auto& adj = adjacency.at(a);
    return std::binary_search(adj.begin(), adj.end(), b);
}

std::size_t Topology::edge_count() const {
    std::size_t degree_sum = 0;
    for (const auto& adj : adjacency) degree_sum += adj.size();
    return degree_sum / 2;
}

double link_probability(double dist, double range, double alpha) {
    const double inner = alpha * range;
    if (dist <= inner) return 1.0;
    if (dist > range) return 0.0;
    return (range - dist) / (range - inner);
}

bool link_decide(double dist, double range, double alpha, Rng& rng) {
    if (dist < 0.0) throw std::invalid_argument("negative distance");
    if (dist <= alpha * range) return true;
    if (dist > range) return false;
    return rng.uniform01() < link_probability(dist, range, alpha);
}

Topology generate_topology(const TopologyConfig& cfg) {
    Rng rng(cfg.seed);
    return generate_topology(cfg, rng);
}

Topology generate_topology(const TopologyConfig& cfg, Rng& rng) {
    cfg.validate();
    Topology topo;
    topo.positions.resize(cfg.node_count);
    if (cfg.placement == Placement::Grid) {
        const auto side = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(cfg.node_count))));
        const double sx = side > 1 ? cfg.area_w / static_cast<double>(side - 1) : 0.0;
        const double sy = side > 1 ? cfg.area_h / static_cast<double>(side - 1) : 0.0;
        for (std::size_t i = 0; i < cfg.node_count; ++i) {
            topo.positions[i] = {static_cast<double>(i % side) * sx, static_cast<double>(i / side) * sy};
        }
    } else {
        for (auto& p : topo.positions) {
            p.x = rng.uniform(0.0, cfg.area_w);
            p.y = rng.uniform(0.0, cfg.area_h);
        }
    }

    topo.adjacency.assign(cfg.node_count, {});
    for (std::size_t i = 0; i < cfg.node_count; ++i) {
        for (std::size_t j = i + 1; j < cfg.node_count; ++j) {
            if (link_decide(distance(topo.positions[i], topo.positions[j]), cfg.range_m, cfg.alpha, rng)) {
                topo.adjacency[i].push_back(j);
                topo.adjacency[j].push_back(i);
            }
        }
    }
    // each list comes out sorted: lower neighbours first, then higher ones
    return topo;
}

std::optional<std::vector<std::size_t>> route(const Topology& topo, std::size_t src, std::size_t dst) {
    if (src == dst) throw std::invalid_argument("route needs distinct endpoints");
    if (src >= topo.size() || dst >= topo.size()) throw std::out_of_range("route endpoint out of range");

    constexpr std::size_t kUnseen = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> parent(topo.size(), kUnseen);
    std::deque<std::size_t> queue{src};
    parent[src] = src;
    while (!queue.empty()) {
        const std::size_t u = queue.front();
        queue.pop_front();
        if (u == dst) break;
        for (std::size_t v : topo.adjacency[u]) {
            if (parent[v] != kUnseen) continue;
            parent[v] = u;
            queue.push_back(v);
        }
    }
    if (parent[dst] == kUnseen) return std::nullopt;

    std::vector<std::size_t> path{dst};
    while (path.back() != src) path.push_back(parent[path.back()]);
    std::reverse(path.begin(), path.end());
    return path;
}

std::uint64_t frame_bytes(Scheme scheme, std::uint32_t packet_size, bool ext_iv_on_air) {
    const auto layout = scheme == Scheme::TkipBaseline
                            ? codec::FrameLayout::TkipBaseline
                            : (ext_iv_on_air ? codec::FrameLayout::LotkipTypeA : codec::FrameLayout::LotkipTypeB);
    return packet_size + codec::overhead_of(layout).total() + codec::kMacHeaderFcsBytes;
}

namespace {

double crypto_energy_uj(Scheme scheme, std::uint32_t packet_size, bool first_packet,
                        const cost::EnergyModelParams& params) {
    return scheme == Scheme::TkipBaseline
               ? cost::tkip_energy_uj(packet_size, cost::KeyMixCase::NoCache, true, params)
               : cost::tkip_energy_uj(packet_size, cost::KeyMixCase::Cache, first_packet, params);
}

}  // namespace

PacketEnergy packet_energy(Scheme scheme, std::uint32_t packet_size, std::size_t hop_count, bool first_packet,
                           bool ext_iv_on_air, const cost::EnergyModelParams& params, const RadioOptions& radio) {
    if (hop_count == 0) throw std::invalid_argument("packet needs at least one hop");
    const std::uint64_t f = frame_bytes(scheme, packet_size, ext_iv_on_air);
    double per_hop = cost::tx_energy_uj(f, params) + cost::rx_energy_uj(f, params);
    if (radio.ack_enabled) per_hop += cost::tx_energy_uj(radio.ack_size, params) + cost::rx_energy_uj(radio.ack_size, params);
    return {2.0 * crypto_energy_uj(scheme, packet_size, first_packet, params),
            static_cast<double>(hop_count) * per_hop};
}

void EnergyLedger::charge(std::size_t node, double uj) {
    if (uj < 0.0) throw std::invalid_argument("negative energy charge");
    node_uj_.at(node) += uj;
    charged_uj_ += uj;
    ++events_;
}

double EnergyLedger::network_uj() const {
    double sum = 0.0;
    for (double e : node_uj_) sum += e;
    return sum;
}

void charge_packet(EnergyLedger& ledger, const std::vector<std::size_t>& path, Scheme scheme,
                   std::uint32_t packet_size, bool first_packet, bool ext_iv_on_air,
                   const cost::EnergyModelParams& params, const RadioOptions& radio) {
    const double crypto_uj = crypto_energy_uj(scheme, packet_size, first_packet, params);
    ledger.charge(path.front(), crypto_uj);
    ledger.charge(path.back(), crypto_uj);

    const std::uint64_t f = frame_bytes(scheme, packet_size, ext_iv_on_air);
    const double tx = cost::tx_energy_uj(f, params);
    const double rx = cost::rx_energy_uj(f, params);
    const double ack_tx = cost::tx_energy_uj(radio.ack_size, params);
    const double ack_rx = cost::rx_energy_uj(radio.ack_size, params);
    for (std::size_t h = 0; h + 1 < path.size(); ++h) {
        ledger.charge(path[h], tx);
        ledger.charge(path[h + 1], rx);
        if (radio.ack_enabled) {
            ledger.charge(path[h + 1], ack_tx);
            ledger.charge(path[h], ack_rx);
        }
    }
}

void TrafficConfig::validate() const {
    if (packet_sizes.empty()) throw std::invalid_argument("no packet sizes");
    for (auto p : packet_sizes) {
        if (p < kMinPacketSize || p > kMaxPacketSize) {
            throw std::invalid_argument("packet size " + std::to_string(p) + " outside [256, 2312]");
        }
    }
    if (packets_per_scenario == 0) throw std::invalid_argument("packets per scenario must be positive");
    if (scenario_count == 0) throw std::invalid_argument("scenario count must be positive");
    if (schemes.empty()) throw std::invalid_argument("no schemes selected");
    if (refresh_interval == 0) throw std::invalid_argument("refresh interval K must be positive");
}

const SeriesPoint* SimResult::find(std::uint32_t packet_size, Scheme scheme, Placement placement) const {
    for (const auto& p : points) {
        if (p.packet_size == packet_size && p.scheme == scheme && p.placement == placement) return &p;
    }
    return nullptr;
}

std::optional<double> SimResult::efficiency_factor(std::uint32_t packet_size, Placement placement) const {
    const auto* base = find(packet_size, Scheme::TkipBaseline, placement);
    const auto* lot = find(packet_size, Scheme::Lotkip, placement);
    if (!base || !lot || lot->network_energy_j <= 0.0) return std::nullopt;
    return base->network_energy_j / lot->network_energy_j;
}

namespace {

constexpr std::uint64_t kEpochPackets = 1u << 16;

struct Scenario {
    Topology topology;
    std::vector<std::size_t> path;
};

Scenario make_scenario(const TopologyConfig& tcfg, const TrafficConfig& traffic, std::size_t index) {
    Rng topo_rng(tcfg.seed, index);
    Rng pair_rng(traffic.seed, index);
    Scenario sc{generate_topology(tcfg, topo_rng), {}};
    const std::size_t n = sc.topology.size();
    for (int attempt = 0; attempt < kPairSamplingAttempts; ++attempt) {
        const std::size_t src = pair_rng.below(n);
        std::size_t dst = pair_rng.below(n - 1);
        if (dst >= src) ++dst;
        if (auto path = route(sc.topology, src, dst)) {
            sc.path = std::move(*path);
            return sc;
        }
    }
    throw ConfigurationError("scenario " + std::to_string(index) + ": no connected transmitter/receiver pair after " +
                             std::to_string(kPairSamplingAttempts) + " draws");
}

}  // namespace

SimResult run_experiment(const TopologyConfig& tcfg, const TrafficConfig& traffic) {
    tcfg.validate();
    traffic.validate();

    std::vector<Scenario> scenarios;
    scenarios.reserve(traffic.scenario_count);
    for (std::size_t s = 0; s < traffic.scenario_count; ++s) scenarios.push_back(make_scenario(tcfg, traffic, s));

    SimResult result;
    const double scale = 1e-6 / static_cast<double>(traffic.scenario_count);
    for (std::uint32_t p : traffic.packet_sizes) {
        for (Scheme scheme : traffic.schemes) {
            SeriesPoint point;
            point.packet_size = p;
            point.scheme = scheme;
            point.placement = tcfg.placement;
            point.node_energy_j.assign(tcfg.node_count, 0.0);
            double network_uj = 0.0;
            double hops = 0.0;
            for (const auto& sc : scenarios) {
                EnergyLedger ledger(tcfg.node_count);
                for (std::uint64_t k = 0; k < traffic.packets_per_scenario; ++k) {
                    const bool epoch_start = k % kEpochPackets == 0;
                    const bool ext_iv = scheme == Scheme::TkipBaseline || epoch_start ||
                                        k % traffic.refresh_interval == 0;
                    charge_packet(ledger, sc.path, scheme, p, epoch_start, ext_iv, traffic.energy, traffic.radio);
                }
                network_uj += ledger.network_uj();
                for (std::size_t i = 0; i < tcfg.node_count; ++i) point.node_energy_j[i] += ledger.node_uj()[i];
                point.events += ledger.events();
                hops += static_cast<double>(sc.path.size() - 1);
            }
            point.network_energy_j = network_uj * scale;
            for (auto& e : point.node_energy_j) e *= scale;
            point.per_node_j = point.network_energy_j / static_cast<double>(tcfg.node_count);
            point.mean_hops = hops / static_cast<double>(scenarios.size());
            result.points.push_back(std::move(point));
        }
    }
    return result;
}

std::string emit_series(const SimResult& result) {
    std::vector<const SeriesPoint*> rows;
    for (const auto& p : result.points) rows.push_back(&p);
    std::stable_sort(rows.begin(), rows.end(), [](const SeriesPoint* a, const SeriesPoint* b) {
        return std::tuple(a->packet_size, a->scheme, a->placement) < std::tuple(b->packet_size, b->scheme, b->placement);
    });

    std::ostringstream out;
    out << "P,scheme,placement,network_energy_J,per_node_J,efficiency_factor\n";
    char buf[64];
    for (const auto* r : rows) {
        out << r->packet_size << ',' << to_string(r->scheme) << ',' << to_string(r->placement) << ',';
        std::snprintf(buf, sizeof buf, "%.6f", r->network_energy_j);
        out << buf << ',';
        std::snprintf(buf, sizeof buf, "%.6f", r->per_node_j);
        out << buf << ',';
        if (auto eff = result.efficiency_factor(r->packet_size, r->placement)) {
            std::snprintf(buf, sizeof buf, "%.6f", *eff);
            out << buf;
        }
        out << '\n';
    }
    return out.str();
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit_line needs >= 2 paired samples");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        ss_res += r * r;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
    return fit;
}

}  // namespace lotkip::sim
