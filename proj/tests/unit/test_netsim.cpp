#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <set>
#include <sstream>

#include "lotkip/netsim.hpp"

using namespace lotkip;
using namespace lotkip::sim;

namespace {

Topology from_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& edges) {
    Topology t;
    t.positions.resize(n);
    t.adjacency.assign(n, {});
    for (auto [a, b] : edges) {
        t.adjacency[a].push_back(b);
        t.adjacency[b].push_back(a);
    }
    for (auto& adj : t.adjacency) std::sort(adj.begin(), adj.end());
    return t;
}

TrafficConfig small_traffic() {
    TrafficConfig t;
    t.packets_per_scenario = 1000;
    t.scenario_count = 10;
    return t;
}

}  // namespace

TEST_CASE("rng is reproducible and in range") {
    Rng a(5), b(5), c(5, 1);
    for (int i = 0; i < 100; ++i) {
        const auto va = a.next_u64();
        CHECK(va == b.next_u64());
        (void)c;
    }
    Rng r(9);
    for (int i = 0; i < 10000; ++i) {
        const double u = r.uniform01();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        REQUIRE(r.below(7) < 7);
    }
    CHECK_THROWS_AS(r.below(0), std::invalid_argument);
    CHECK(Rng(1, 0).next_u64() != Rng(1, 1).next_u64());
}

TEST_CASE("deterministic link rules") {
    Rng rng(1);
    CHECK(link_decide(0.0, 120.0, 0.75, rng));
    CHECK(link_decide(90.0, 120.0, 0.75, rng));
    CHECK_FALSE(link_decide(240.0, 120.0, 0.75, rng));
    CHECK_FALSE(link_decide(120.0001, 120.0, 0.75, rng));
    CHECK_THROWS_AS(link_decide(-1.0, 120.0, 0.75, rng), std::invalid_argument);
    CHECK(link_probability(75.0, 100.0, 0.5) == doctest::Approx(0.5));
    CHECK(link_probability(100.0, 100.0, 0.5) == doctest::Approx(0.0));
    CHECK(link_probability(50.0, 100.0, 0.5) == doctest::Approx(1.0));
    CHECK(link_probability(150.0, 100.0, 0.5) == 0.0);
}

TEST_CASE("band link frequency matches the interpolation") {
    Rng rng(123);
    int hits = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) hits += link_decide(75.0, 100.0, 0.5, rng);
    CHECK(std::abs(hits / double(draws) - 0.5) <= 0.03);
}

TEST_CASE("grid placement is a 7x7 lattice") {
    TopologyConfig cfg;
    const auto t = generate_topology(cfg);
    REQUIRE(t.size() == 49);
    const double spacing = 500.0 / 6.0;
    CHECK(t.positions[0].x == 0.0);
    CHECK(t.positions[48].x == doctest::Approx(500.0));
    CHECK(t.positions[48].y == doctest::Approx(500.0));
    CHECK(t.positions[1].x == doctest::Approx(spacing));
    CHECK(t.positions[7].y == doctest::Approx(spacing));
}

TEST_CASE("full-range grid gives every node at least two neighbours") {
    TopologyConfig cfg;
    cfg.alpha = 1.0;
    cfg.range_m = 500.0 / 6.0 * std::sqrt(2.0) + 1e-6;
    const auto t = generate_topology(cfg);
    for (const auto& adj : t.adjacency) CHECK(adj.size() >= 2);
    CHECK(t.adjacency[0].size() == 3);
}

TEST_CASE("alpha = 1 is a unit-disk graph") {
    TopologyConfig cfg;
    cfg.placement = Placement::Random;
    cfg.alpha = 1.0;
    cfg.seed = 17;
    const auto t = generate_topology(cfg);
    for (std::size_t i = 0; i < t.size(); ++i) {
        for (std::size_t j = i + 1; j < t.size(); ++j) {
            REQUIRE(t.linked(i, j) == (distance(t.positions[i], t.positions[j]) <= cfg.range_m));
        }
    }
}

TEST_CASE("topology invariants and determinism") {
    for (auto placement : {Placement::Grid, Placement::Random}) {
        TopologyConfig cfg;
        cfg.placement = placement;
        cfg.seed = 44;
        const auto a = generate_topology(cfg);
        const auto b = generate_topology(cfg);
        CHECK(a.adjacency == b.adjacency);
        for (std::size_t i = 0; i < a.size(); ++i) {
            CHECK(a.positions[i].x == b.positions[i].x);
            CHECK(std::is_sorted(a.adjacency[i].begin(), a.adjacency[i].end()));
            for (std::size_t j : a.adjacency[i]) {
                CHECK(j != i);
                CHECK(a.linked(j, i));
                const double d = distance(a.positions[i], a.positions[j]);
                CHECK(d <= cfg.range_m);
            }
            for (std::size_t j = 0; j < a.size(); ++j) {
                if (j != i && distance(a.positions[i], a.positions[j]) <= cfg.alpha * cfg.range_m) {
                    CHECK(a.linked(i, j));
                }
            }
        }
    }
}

TEST_CASE("topology config validation") {
    TopologyConfig cfg;
    cfg.alpha = 1.5;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.alpha = 0.5;
    cfg.node_count = 1;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg.node_count = 2;
    cfg.range_m = 0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("routing") {
    const auto tri = from_edges(3, {{0, 1}, {1, 2}, {0, 2}});
    CHECK(*route(tri, 0, 2) == std::vector<std::size_t>{0, 2});
    CHECK(*route(tri, 0, 1) == std::vector<std::size_t>{0, 1});
    const auto diamond = from_edges(4, {{0, 2}, {0, 1}, {1, 3}, {2, 3}});
    CHECK(*route(diamond, 0, 3) == std::vector<std::size_t>{0, 1, 3});
    const auto split = from_edges(4, {{0, 1}, {2, 3}});
    CHECK_FALSE(route(split, 0, 3));
    CHECK_THROWS_AS(route(tri, 1, 1), std::invalid_argument);
    CHECK_THROWS_AS(route(tri, 0, 5), std::out_of_range);
}

TEST_CASE("routes on generated topologies are minimal") {
    TopologyConfig cfg;
    cfg.placement = Placement::Random;
    cfg.seed = 3;
    const auto t = generate_topology(cfg);
    for (std::size_t dst = 1; dst < t.size(); ++dst) {
        auto path = route(t, 0, dst);
        if (!path) continue;
        for (std::size_t k = 0; k + 1 < path->size(); ++k) CHECK(t.linked((*path)[k], (*path)[k + 1]));
        // BFS layer check: no shortcut between non-consecutive path nodes.
        for (std::size_t a = 0; a < path->size(); ++a) {
            for (std::size_t b = a + 2; b < path->size(); ++b) CHECK_FALSE(t.linked((*path)[a], (*path)[b]));
        }
    }
}

TEST_CASE("packet energy composition") {
    const auto e = packet_energy(Scheme::TkipBaseline, 256, 1, true, true);
    CHECK(frame_bytes(Scheme::TkipBaseline, 256, true) == 310);
    CHECK(e.compute_uj == doctest::Approx(2 * 26862.3234));
    CHECK(e.radio_uj == doctest::Approx(579.8 + 353.2));
    CHECK(e.total_uj() == doctest::Approx(54657.6468));

    const auto two = packet_energy(Scheme::TkipBaseline, 256, 2, true, true);
    CHECK(two.compute_uj == doctest::Approx(e.compute_uj));
    CHECK(two.radio_uj == doctest::Approx(2 * e.radio_uj));
    CHECK_THROWS_AS(packet_energy(Scheme::TkipBaseline, 256, 0, true, true), std::invalid_argument);

    CHECK(frame_bytes(Scheme::TkipBaseline, 256, true) - frame_bytes(Scheme::Lotkip, 256, false) == 4);
    CHECK(frame_bytes(Scheme::Lotkip, 256, true) == 310);

    const auto later = packet_energy(Scheme::Lotkip, 256, 1, false, false);
    CHECK(later.compute_uj == doctest::Approx(2 * 0.0198 * (175 * 8 + 1764 * 256 + 2835)));
    CHECK(later.total_uj() < e.total_uj());

    RadioOptions ack;
    ack.ack_enabled = true;
    const auto with_ack = packet_energy(Scheme::TkipBaseline, 256, 3, true, true, {}, ack);
    CHECK(with_ack.radio_uj - 3 * e.radio_uj == doctest::Approx(3 * (431 + 0.48 * 14 + 316 + 0.12 * 14)));
}

TEST_CASE("ledger charges sum to the network energy") {
    EnergyLedger ledger(5);
    RadioOptions radio;
    radio.ack_enabled = true;
    charge_packet(ledger, {0, 3, 4}, Scheme::Lotkip, 512, false, false, {}, radio);
    CHECK(ledger.network_uj() == doctest::Approx(ledger.charged_uj()));
    CHECK(ledger.events() == 2 + 2 * 4);
    CHECK(ledger.node_uj()[1] == 0.0);
    const auto expected = packet_energy(Scheme::Lotkip, 512, 2, false, false, {}, radio).total_uj();
    CHECK(ledger.network_uj() == doctest::Approx(expected));
    CHECK_THROWS_AS(ledger.charge(0, -1.0), std::invalid_argument);
}

TEST_CASE("traffic config validation") {
    TrafficConfig t;
    CHECK_NOTHROW(t.validate());
    t.packet_sizes = {255};
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    t.packet_sizes = {2313};
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
    t.packet_sizes = {2312};
    CHECK_NOTHROW(t.validate());
    t.refresh_interval = 0;
    CHECK_THROWS_AS(t.validate(), std::invalid_argument);
}

TEST_CASE("experiment results are deterministic and consistent") {
    TopologyConfig topo;
    const auto traffic = small_traffic();
    const auto a = run_experiment(topo, traffic);
    const auto b = run_experiment(topo, traffic);
    CHECK(emit_series(a) == emit_series(b));
    REQUIRE(a.points.size() == 16);
    for (const auto& p : a.points) {
        double sum = 0.0;
        for (double e : p.node_energy_j) {
            CHECK(e >= 0.0);
            sum += e;
        }
        CHECK(sum == doctest::Approx(p.network_energy_j));
        CHECK(p.per_node_j == doctest::Approx(p.network_energy_j / 49));
    }
    for (std::uint32_t p : traffic.packet_sizes) {
        CHECK(a.find(p, Scheme::Lotkip, Placement::Grid)->network_energy_j <
              a.find(p, Scheme::TkipBaseline, Placement::Grid)->network_energy_j);
        CHECK(*a.efficiency_factor(p, Placement::Grid) > 1.0);
    }
    for (std::size_t i = 1; i < traffic.packet_sizes.size(); ++i) {
        for (auto s : {Scheme::TkipBaseline, Scheme::Lotkip}) {
            CHECK(a.find(traffic.packet_sizes[i], s, Placement::Grid)->network_energy_j >
                  a.find(traffic.packet_sizes[i - 1], s, Placement::Grid)->network_energy_j);
        }
    }
    auto other = traffic;
    other.seed = 2;
    auto topo2 = topo;
    topo2.seed = 2;
    CHECK(emit_series(run_experiment(topo2, other)) != emit_series(a));
}

TEST_CASE("single-scheme runs have half the rows and no efficiency column") {
    TopologyConfig topo;
    auto traffic = small_traffic();
    traffic.schemes = {Scheme::Lotkip};
    const auto r = run_experiment(topo, traffic);
    CHECK(r.points.size() == 8);
    CHECK_FALSE(r.efficiency_factor(256, Placement::Grid));
    const auto csv = emit_series(r);
    CHECK(csv.find("256,lotkip,grid,") != std::string::npos);
    CHECK(csv.find(",\n") != std::string::npos);
}

TEST_CASE("unconnectable scenarios are reported") {
    TopologyConfig topo;
    topo.range_m = 1.0;
    auto traffic = small_traffic();
    traffic.scenario_count = 1;
    CHECK_THROWS_AS(run_experiment(topo, traffic), ConfigurationError);
}

TEST_CASE("csv header and ordering") {
    TopologyConfig topo;
    auto traffic = small_traffic();
    traffic.packet_sizes = {512, 256};
    const auto csv = emit_series(run_experiment(topo, traffic));
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    CHECK(line == "P,scheme,placement,network_energy_J,per_node_J,efficiency_factor");
    std::vector<std::string> keys;
    while (std::getline(in, line)) keys.push_back(line.substr(0, line.find(',', line.find(',') + 1)));
    CHECK(keys == std::vector<std::string>{"256,tkip", "256,lotkip", "512,tkip", "512,lotkip"});
}

TEST_CASE("line fit") {
    const auto fit = fit_line({1, 2, 3, 4}, {3, 5, 7, 9});
    CHECK(fit.slope == doctest::Approx(2.0));
    CHECK(fit.intercept == doctest::Approx(1.0));
    CHECK(fit.r_squared == doctest::Approx(1.0));
    CHECK_THROWS_AS(fit_line({1}, {1}), std::invalid_argument);
    CHECK(reference_efficiency(256) == doctest::Approx(2.4017));
}
