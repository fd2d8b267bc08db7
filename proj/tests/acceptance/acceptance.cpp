// Acceptance checks, one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "lotkip/cost_model.hpp"
#include "lotkip/frame_codec.hpp"
#include "lotkip/netsim.hpp"
#include "lotkip/vectors.hpp"

namespace {

using namespace lotkip;
using Clock = std::chrono::steady_clock;

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool cond, const std::string& what) {
        if (!cond) {
            if (pass) detail = what;
            pass = false;
        }
    }
};

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

int report(int id, const std::string& title, double limit_s, const std::function<Outcome()>& body) {
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.pass = false;
        o.detail = std::string("exception: ") + e.what();
    }
    const double t = seconds_since(t0);
    if (t > limit_s) o.require(false, "runtime " + std::to_string(t) + " s over the " + std::to_string(limit_s) + " s limit");
    std::printf("%s criterion %d: %s [%.2f s]%s%s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), t,
                o.detail.empty() ? "" : " -- ", o.detail.c_str());
    std::fflush(stdout);
    return o.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------

constexpr std::array<std::array<std::uint64_t, 8>, 8> kPublishedTable{{
    {16, 700, 131, 84176, 84176, 3056, 88063, 88063},
    {32, 1400, 259, 168352, 85054, 3280, 173291, 89993},
    {48, 2100, 387, 252528, 85932, 3504, 258519, 91923},
    {64, 2800, 515, 336704, 86810, 3728, 343747, 93853},
    {80, 3500, 643, 420880, 87668, 3952, 428975, 95763},
    {96, 4200, 771, 505056, 88566, 4176, 514203, 97713},
    {112, 4900, 899, 589232, 89444, 4400, 599431, 99643},
    {128, 5600, 1027, 673408, 90322, 4624, 684659, 101573},
}};

Outcome criterion_table1() {
    Outcome o;
    const auto rows = cost::table1();
    o.require(rows.size() == 8, "expected 8 rows");
    int cells = 0;
    for (std::size_t i = 0; i < rows.size() && i < kPublishedTable.size(); ++i) {
        const auto& r = rows[i];
        const auto& p = kPublishedTable[i];
        const std::array<std::uint64_t, 8> got{r.m, r.mic, r.crc, r.keymix_case1, r.keymix_case2, r.rc4, r.tkip_case1,
                                               r.tkip_case2};
        for (std::size_t c = 0; c < 8; ++c) {
            const bool case2 = c == 4 || c == 7;
            if (r.m == 80 && case2) continue;
            o.require(got[c] == p[c], "m=" + std::to_string(r.m) + " column " + std::to_string(c) + ": " +
                                          std::to_string(got[c]) + " != " + std::to_string(p[c]));
            ++cells;
        }
        if (r.m == 80) {
            o.require(r.keymix_case2 == 87688 && r.tkip_case2 == 95783, "m=80 case-2 formula values");
        }
    }
    const auto devs = cost::table1_deviations();
    o.require(devs.size() == 2 && devs[0].formula - devs[0].published == 20 &&
                  devs[1].formula - devs[1].published == 20,
              "m=80 deviation note");
    if (o.pass) {
        o.detail = std::to_string(cells) + " cells exact; m=80 case 2 gives 87688/95783, printed 87668/95763 (20 cycles)";
    }
    return o;
}

Outcome criterion_energy() {
    Outcome o;
    const auto cycles = cost::tkip_energy_cycles(256, cost::KeyMixCase::NoCache, true);
    const double uj = cost::tkip_energy_uj(256, cost::KeyMixCase::NoCache, true);
    const double rel = std::abs(uj - 26804.0) / 26804.0;
    o.require(cycles == 1356683, "cycles " + std::to_string(cycles));
    o.require(std::abs(uj - 26862.3) < 0.05, "energy " + std::to_string(uj));
    o.require(rel <= 0.003, "relative deviation " + std::to_string(rel));
    if (o.pass) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%llu cycles, %.4f uJ, %.3f%% from 26804 uJ",
                      static_cast<unsigned long long>(cycles), uj, 100.0 * rel);
        o.detail = buf;
    }
    return o;
}

Outcome criterion_crypto() {
    Outcome o;
    std::string summary;
    for (const auto& r : vectors::check_directory(LOTKIP_VECTORS_DIR)) {
        o.require(!r.missing, r.name + " missing");
        o.require(r.cases >= 1000, r.name + " has only " + std::to_string(r.cases) + " cases");
        o.require(r.mismatches == 0, r.name + ": " + std::to_string(r.mismatches) + " mismatches" +
                                         (r.first_failures.empty() ? "" : " (" + r.first_failures[0] + ")"));
        summary += (summary.empty() ? "" : ", ") + r.name + "=" + std::to_string(r.cases);
    }
    // In-process bitwise CRC cross-check on fresh inputs.
    std::mt19937_64 rng(0xC0C);
    for (int trial = 0; trial < 1000; ++trial) {
        Bytes data(rng() % 512);
        for (auto& b : data) b = static_cast<std::uint8_t>(rng());
        std::uint32_t crc = 0xFFFFFFFFu;
        for (auto b : data) {
            crc ^= b;
            for (int k = 0; k < 8; ++k) crc = (crc >> 1) ^ (0xEDB88320u & (0u - (crc & 1u)));
        }
        o.require(crypto::crc32(data) == ~crc, "bitwise CRC cross-check");
    }
    if (o.pass) o.detail = "byte-exact: " + summary + ", plus 1000 bitwise CRC cases";
    return o;
}

// --- criterion 4 -------------------------------------------------------------

struct Rx {
    codec::LotkipReceiverState state;
    codec::ReplayWindow window;
    codec::CountermeasureState cm;
    codec::ManualClock clock;
};

codec::SessionKeys random_keys(std::mt19937_64& rng) {
    codec::SessionKeys k;
    for (auto& b : k.tk.bytes) b = static_cast<std::uint8_t>(rng());
    k.mic_key_tx = {static_cast<std::uint32_t>(rng()), static_cast<std::uint32_t>(rng())};
    k.mic_key_rx = k.mic_key_tx;
    for (auto& b : k.ta.bytes) b = static_cast<std::uint8_t>(rng());
    k.key_id = static_cast<std::uint8_t>(rng() & 3);
    return k;
}

struct BruteWindow {
    std::vector<std::uint64_t> accepted;

    codec::ReplayVerdict step(std::uint64_t tsc) {
        std::vector<std::uint64_t> top = accepted;
        std::sort(top.rbegin(), top.rend());
        if (top.size() > 16) top.resize(16);
        codec::ReplayVerdict v;
        if (top.empty() || tsc > top.front()) {
            v = codec::ReplayVerdict::Accept;
        } else if (tsc > top.back() && std::find(top.begin(), top.end(), tsc) == top.end()) {
            v = codec::ReplayVerdict::Window;
        } else {
            v = codec::ReplayVerdict::Reject;
        }
        if (v != codec::ReplayVerdict::Reject) accepted.push_back(tsc);
        return v;
    }
};

Outcome criterion_codec() {
    Outcome o;
    std::mt19937_64 rng(0x4C4F54);
    codec::MsduAddressing addr;
    for (auto& b : addr.sa.bytes) b = static_cast<std::uint8_t>(rng());
    for (auto& b : addr.da.bytes) b = static_cast<std::uint8_t>(rng());

    // Round trips.
    const int kRoundTrips = 10'000;
    int round_trips = 0;
    for (int trial = 0; trial < kRoundTrips && o.pass; ++trial) {
        const auto keys = random_keys(rng);
        const bool lotkip = rng() & 1;
        const auto k = static_cast<std::uint32_t>(1 + rng() % 300);
        const std::size_t thr = codec::kMinFragThreshold + rng() % (codec::kMaxFragThreshold - codec::kMinFragThreshold + 1);
        const std::size_t msdus = 1 + rng() % 3;
        codec::LotkipSenderState sender(k, crypto::Tsc48(rng() % (crypto::Tsc48::kMax - 16)));
        crypto::Tsc48 tsc = sender.next_tsc;
        Rx rx;
        for (std::size_t m = 0; m < msdus && o.pass; ++m) {
            Bytes msdu(rng() % (codec::kMaxMsduBytes + 1));
            for (auto& b : msdu) b = static_cast<std::uint8_t>(rng());
            auto sealed = lotkip ? codec::lotkip_seal(keys, sender, addr, msdu, thr)
                                 : codec::tkip_seal(keys, tsc, addr, msdu, thr);
            o.require(sealed.ok(), "seal failed");
            if (!sealed) break;
            std::vector<Bytes> wire;
            for (const auto& f : sealed.value()) wire.push_back(f.serialize());
            auto opened = lotkip ? codec::lotkip_open(keys, rx.state, wire, rx.window, rx.cm, rx.clock, addr)
                                 : codec::tkip_open(keys, wire, rx.window, rx.cm, rx.clock, addr);
            o.require(opened.ok() && opened.value() == msdu, "round trip mismatch in trial " + std::to_string(trial));
        }
        ++round_trips;
    }

    // Single-bit ciphertext corruption.
    int flips = 0;
    for (int trial = 0; trial < 5'000 && o.pass; ++trial) {
        const auto keys = random_keys(rng);
        const bool lotkip = rng() & 1;
        Bytes msdu(rng() % 600);
        for (auto& b : msdu) b = static_cast<std::uint8_t>(rng());
        codec::LotkipSenderState sender(4);
        crypto::Tsc48 tsc(rng() % 1'000'000);
        sender.next_tsc = tsc;
        // Open a first MSDU so type-B frames have an epoch.
        auto first = lotkip ? codec::lotkip_seal(keys, sender, addr, Bytes(4, 0)) : codec::tkip_seal(keys, tsc, addr, Bytes(4, 0));
        auto sealed = lotkip ? codec::lotkip_seal(keys, sender, addr, msdu, 256) : codec::tkip_seal(keys, tsc, addr, msdu, 256);
        std::vector<Bytes> wire;
        for (const auto& f : sealed.value()) wire.push_back(f.serialize());
        const std::size_t which = rng() % wire.size();
        const std::size_t header = sealed.value()[which].header_size();
        const std::size_t bit = rng() % ((wire[which].size() - header) * 8);
        wire[which][header + bit / 8] ^= static_cast<std::uint8_t>(1u << (bit % 8));
        Rx rx;
        const Bytes warm = first.value()[0].serialize();
        if (lotkip) {
            (void)codec::lotkip_open(keys, rx.state, std::vector<Bytes>{warm}, rx.window, rx.cm, rx.clock, addr);
        } else {
            (void)codec::tkip_open(keys, std::vector<Bytes>{warm}, rx.window, rx.cm, rx.clock, addr);
        }
        auto opened = lotkip ? codec::lotkip_open(keys, rx.state, wire, rx.window, rx.cm, rx.clock, addr)
                             : codec::tkip_open(keys, wire, rx.window, rx.cm, rx.clock, addr);
        o.require(!opened.ok(), "undetected bit flip in trial " + std::to_string(trial));
        ++flips;
    }

    // Replay window against a brute-force reference.
    const int kStreams = 100'000;
    long steps = 0;
    for (int stream = 0; stream < kStreams && o.pass; ++stream) {
        codec::ReplayWindow w;
        BruteWindow ref;
        std::uint64_t top = rng() % 1'000'000;
        const int len = 8 + static_cast<int>(rng() % 32);
        for (int k = 0; k < len; ++k) {
            std::uint64_t tsc;
            switch (rng() % 4) {
                case 0: tsc = ++top; break;                                      // in order
                case 1: tsc = top + 1 + rng() % 5; top = std::max(top, tsc); break;  // gap
                case 2: tsc = top >= 24 ? top - rng() % 24 : top; break;            // late or duplicate
                default: tsc = top >= 40 ? top - rng() % 40 : top; break;           // far behind
            }
            const auto want = ref.step(tsc);
            const auto got = codec::replay_classify(w, crypto::Tsc48(tsc));
            o.require(got == want, "replay verdict mismatch in stream " + std::to_string(stream));
            ++steps;
        }
    }

    // Countermeasures through the codec: forged MSDUs at t and t + gap.
    int cm_cases = 0;
    const std::array<std::int64_t, 8> fixed_gaps{0, 1, 30'000, 59'999, 60'000, 60'001, 90'000, 3'600'000};
    for (int trial = 0; trial < 400 && o.pass; ++trial) {
        const std::int64_t gap = trial < 8 ? fixed_gaps[trial] : static_cast<std::int64_t>(rng() % 120'001);
        auto keys = random_keys(rng);
        auto forger = keys;
        forger.mic_key_tx.k0 ^= 1;
        crypto::Tsc48 tsc;
        Rx rx;
        const std::int64_t t0 = static_cast<std::int64_t>(rng() % 1'000'000);
        rx.clock.set(codec::Millis{t0});
        auto f1 = codec::tkip_seal(forger, tsc, addr, Bytes(20, 1)).value();
        auto r1 = codec::tkip_open(keys, std::vector<Bytes>{f1[0].serialize()}, rx.window, rx.cm, rx.clock, addr);
        o.require(!r1.ok() && r1.error() == codec::CodecError::MicFailure, "first forgery not a MIC failure");
        o.require(!rx.cm.blackout_until, "blackout after one failure");
        rx.clock.set(codec::Millis{t0 + gap});
        auto f2 = codec::tkip_seal(forger, tsc, addr, Bytes(20, 2)).value();
        (void)codec::tkip_open(keys, std::vector<Bytes>{f2[0].serialize()}, rx.window, rx.cm, rx.clock, addr);
        const bool expect = gap < 60'000;
        o.require(rx.cm.blackout_until.has_value() == expect && rx.cm.rekey_required == expect,
                  "countermeasure with gap " + std::to_string(gap) + " ms");
        if (expect) {
            o.require(*rx.cm.blackout_until == codec::Millis{t0 + gap + 60'000}, "blackout end time");
            auto good = codec::tkip_seal(keys, tsc, addr, Bytes(5, 3)).value();
            auto blocked = codec::tkip_open(keys, std::vector<Bytes>{good[0].serialize()}, rx.window, rx.cm, rx.clock, addr);
            o.require(!blocked.ok() && blocked.error() == codec::CodecError::Blackout, "traffic during blackout");
        }
        ++cm_cases;
    }

    if (o.pass) {
        o.detail = std::to_string(round_trips) + " round-trip cases, " + std::to_string(flips) +
                   "/" + std::to_string(flips) + " bit flips detected, " + std::to_string(kStreams) +
                   " replay streams (" + std::to_string(steps) + " verdicts) match, " + std::to_string(cm_cases) +
                   " countermeasure cases";
    }
    return o;
}

Outcome criterion_overhead() {
    Outcome o;
    std::mt19937_64 rng(0x0E4D);
    auto keys = random_keys(rng);
    codec::MsduAddressing addr;
    crypto::Tsc48 tsc;
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t len = rng() % (codec::kMaxMsduBytes - 8 + 1);
        auto frames = codec::tkip_seal(keys, tsc, addr, Bytes(len, 0)).value();
        o.require(frames.size() == 1 && frames[0].size() == len + 20, "baseline frame is not len + 20");
    }
    int combos = 0;
    for (std::uint32_t k : {1u, 2u, 3u, 4u, 7u, 16u, 64u, 256u, 1000u}) {
        for (std::size_t n : {1ul, 2ul, 5ul, 16ul, 100ul, 257ul, 1000ul}) {
            codec::LotkipSenderState sender(k);
            std::size_t a = 0;
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t len = rng() % 1500;
                const auto f = codec::lotkip_seal(keys, sender, addr, Bytes(len, 0)).value().at(0);
                const bool is_a = f.layout == codec::FrameLayout::LotkipTypeA;
                a += is_a;
                o.require(f.size() == len + (is_a ? 20u : 16u), "lotkip frame overhead");
            }
            o.require(a == (n + k - 1) / k, "type-A count for n=" + std::to_string(n) + " K=" + std::to_string(k));
            ++combos;
        }
    }
    o.require(codec::overhead_of(codec::FrameLayout::TkipBaseline).total() == 20, "baseline ledger");
    o.require(codec::overhead_of(codec::FrameLayout::LotkipTypeB).total() == 16, "type-B ledger");
    if (o.pass) o.detail = "baseline 20 B/frame, type B 16 B/frame, type-A fraction ceil(n/K)/n over " +
                           std::to_string(combos) + " (n, K) pairs";
    return o;
}

Outcome criterion_simulation() {
    Outcome o;
    const sim::TrafficConfig traffic;  // defaults: 100 scenarios x 10^4 packets, P = 256..2048
    std::string detail;
    for (auto placement : {sim::Placement::Grid, sim::Placement::Random}) {
        sim::TopologyConfig topo;
        topo.placement = placement;
        const auto result = sim::run_experiment(topo, traffic);
        const std::string tag = sim::to_string(placement);

        std::vector<double> xs;
        for (auto p : traffic.packet_sizes) xs.push_back(p);
        for (auto scheme : {sim::Scheme::TkipBaseline, sim::Scheme::Lotkip}) {
            std::vector<double> ys;
            for (auto p : traffic.packet_sizes) ys.push_back(result.find(p, scheme, placement)->network_energy_j);
            const auto fit = sim::fit_line(xs, ys);
            o.require(fit.r_squared >= 0.99, tag + " " + sim::to_string(scheme) + " R^2 " + std::to_string(fit.r_squared));
        }
        double prev = 0.0, worst = 0.0;
        std::string effs;
        for (auto p : traffic.packet_sizes) {
            const auto* base = result.find(p, sim::Scheme::TkipBaseline, placement);
            const auto* lot = result.find(p, sim::Scheme::Lotkip, placement);
            o.require(lot->network_energy_j < base->network_energy_j, tag + " lotkip not below baseline at P=" + std::to_string(p));
            const double eff = *result.efficiency_factor(p, placement);
            const double ref = sim::reference_efficiency(p);
            const double dev = (eff - ref) / ref;
            worst = std::abs(dev) > std::abs(worst) ? dev : worst;
            o.require(std::abs(dev) <= 0.25, tag + " efficiency at P=" + std::to_string(p) + " is " + std::to_string(eff));
            o.require(eff > prev, tag + " efficiency not increasing at P=" + std::to_string(p));
            prev = eff;
            char buf[32];
            std::snprintf(buf, sizeof buf, "%s%.3f", effs.empty() ? "" : ",", eff);
            effs += buf;
        }
        char buf[96];
        std::snprintf(buf, sizeof buf, "%s eff=[%s] max dev %+.1f%%; ", tag.c_str(), effs.c_str(), 100.0 * worst);
        detail += buf;
    }

    // (b) across further seeds at reduced scale.
    for (std::uint64_t seed = 2; seed <= 6; ++seed) {
        for (auto placement : {sim::Placement::Grid, sim::Placement::Random}) {
            sim::TopologyConfig topo;
            topo.placement = placement;
            topo.seed = seed;
            auto t = traffic;
            t.seed = seed;
            t.scenario_count = 20;
            const auto result = sim::run_experiment(topo, t);
            for (auto p : t.packet_sizes) {
                o.require(result.find(p, sim::Scheme::Lotkip, placement)->network_energy_j <
                              result.find(p, sim::Scheme::TkipBaseline, placement)->network_energy_j,
                          "seed " + std::to_string(seed) + " lotkip not below baseline");
            }
        }
    }
    if (o.pass) o.detail = detail + "R^2 >= 0.99; lotkip below baseline for seeds 1..6";
    return o;
}

Outcome criterion_quasi_udg() {
    Outcome o;
    sim::TopologyConfig cfg;
    cfg.placement = sim::Placement::Random;
    const double inner = cfg.alpha * cfg.range_m;
    sim::Rng pick(0x5EED);
    const long kPairs = 100'000;
    long sampled = 0, violations = 0, band = 0, band_links = 0;
    double band_expected = 0.0;
    std::uint64_t seed = 1;
    while (sampled < kPairs) {
        cfg.seed = seed++;
        const auto topo = sim::generate_topology(cfg);
        for (int k = 0; k < 1000 && sampled < kPairs; ++k) {
            const std::size_t a = pick.below(topo.size());
            std::size_t b = pick.below(topo.size() - 1);
            if (b >= a) ++b;
            const double d = sim::distance(topo.positions[a], topo.positions[b]);
            const bool linked = topo.linked(a, b);
            if (linked != topo.linked(b, a)) ++violations;
            if (d <= inner && !linked) ++violations;
            if (d > cfg.range_m && linked) ++violations;
            if (d > inner && d <= cfg.range_m) {
                ++band;
                band_links += linked;
                band_expected += sim::link_probability(d, cfg.range_m, cfg.alpha);
            }
            ++sampled;
        }
    }
    const double empirical = static_cast<double>(band_links) / static_cast<double>(band);
    const double expected = band_expected / static_cast<double>(band);
    o.require(violations == 0, std::to_string(violations) + " rule violations");
    o.require(band > 1000, "too few band pairs");
    o.require(std::abs(empirical - expected) <= 0.03, "band frequency " + std::to_string(empirical) + " vs " + std::to_string(expected));

    // Fixed-distance draws across the band.
    sim::Rng rng(0xBA4D);
    double worst = 0.0;
    for (double frac : {0.1, 0.25, 0.5, 0.75, 0.9}) {
        const double d = inner + frac * (cfg.range_m - inner);
        const int draws = 10'000;
        int hits = 0;
        for (int i = 0; i < draws; ++i) hits += sim::link_decide(d, cfg.range_m, cfg.alpha, rng);
        const double err = std::abs(hits / double(draws) - sim::link_probability(d, cfg.range_m, cfg.alpha));
        worst = std::max(worst, err);
        o.require(err <= 0.03, "link_decide frequency off at d=" + std::to_string(d));
    }
    if (o.pass) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "%ld pairs, 0 violations; band pairs %ld: empirical %.4f vs interpolated %.4f; "
                      "fixed-distance max error %.4f",
                      sampled, band, empirical, expected, worst);
        o.detail = buf;
    }
    return o;
}

}  // namespace

int main() {
    int failed = 0;
    failed += report(1, "Table 1 reproduction", 1.0, criterion_table1);
    failed += report(2, "energy anchor at 256 bytes", 1.0, criterion_energy);
    failed += report(3, "crypto oracle equivalence", 30.0, criterion_crypto);
    failed += report(4, "codec property suite", 60.0, criterion_codec);
    failed += report(5, "overhead accounting", 10.0, criterion_overhead);
    failed += report(6, "simulation trends", 300.0, criterion_simulation);
    failed += report(7, "quasi-UDG soundness", 10.0, criterion_quasi_udg);
    std::printf("%d of 7 criteria failed\n", failed);
    return failed;
}
