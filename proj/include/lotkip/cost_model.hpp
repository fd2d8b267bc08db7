#pragma once

// Operation-count and energy model for the TKIP pipeline.
//
// Costs are tallies of byte-wise primitive operations. Coefficients are kept
// as published, including where the two models count MIC words differently
// (m/4 in the cycle tables, m/32 in the closed-form energy model).

#include <cstdint>
#include <string>
#include <vector>

namespace lotkip::cost {

struct OpCounts {
    std::uint64_t t_and = 0;
    std::uint64_t t_or = 0;
    std::uint64_t t_shift = 0;
    std::uint64_t t_mem = 0;
    std::uint64_t t_rot = 0;
    std::uint64_t t_swap = 0;
    std::uint64_t t_sub = 0;

    std::uint64_t total() const { return t_and + t_or + t_shift + t_mem + t_rot + t_swap + t_sub; }

    OpCounts& operator+=(const OpCounts& o);
    friend OpCounts operator+(OpCounts a, const OpCounts& b) { return a += b; }
    friend OpCounts operator*(std::uint64_t k, const OpCounts& c);
    friend bool operator==(const OpCounts&, const OpCounts&) = default;
};

/// Cycles per primitive operation.
struct CostWeights {
    double w_and = 1.0;
    double w_or = 1.0;
    double w_shift = 1.0;
    double w_mem = 1.0;
    double w_rot = 1.0;
    double w_swap = 1.0;
    double w_sub = 1.0;
};

double weighted_total(const OpCounts& counts, const CostWeights& weights);

/// Device energy constants, all in microjoules.
struct EnergyModelParams {
    double cycle_energy_uj = 0.0198;
    double tx_fixed_uj = 431.0;
    double tx_per_byte_uj = 0.48;
    double rx_fixed_uj = 316.0;
    double rx_per_byte_uj = 0.12;
};

/// Case 1 recomputes Phase 1 for every block; Case 2 caches the TTAK.
enum class KeyMixCase { NoCache, Cache };

inline constexpr unsigned kDefaultPhaseLoopCount = 8;
inline constexpr std::uint64_t kKeystreamBlockBytes = 16;

OpCounts mic_cycles(std::uint64_t m);
OpCounts crc_cycles(std::uint64_t m);
OpCounts phase1_cycles(unsigned loop_count = kDefaultPhaseLoopCount);
OpCounts phase2_cycles();

/// Key-mixing cost for m message bytes, charged per 16-byte keystream block
/// (partial blocks round up). With Cache, a first packet pays one full
/// uncached block and then the cached increment per extra block; a later
/// packet pays only increments. Throws std::invalid_argument for m == 0.
OpCounts keymix_cycles(std::uint64_t m, KeyMixCase mode, bool first_packet = true);

OpCounts rc4_cycles(std::uint64_t m);

/// mic + crc + keymix + rc4 at unit weights.
std::uint64_t tkip_cycles(std::uint64_t m, KeyMixCase mode);

/// Closed-form energy model in cycles: 175n + c*m + 2835 with
/// n = max(1, floor(m/32)), c = 5283 (Case 1, or Case 2 first packet) or
/// 1764 (Case 2 later packets).
std::uint64_t tkip_energy_cycles(std::uint64_t m, KeyMixCase mode, bool first_packet);
double tkip_energy_uj(std::uint64_t m, KeyMixCase mode, bool first_packet, const EnergyModelParams& params = {});

double tx_energy_uj(std::uint64_t size_bytes, const EnergyModelParams& params = {});
double rx_energy_uj(std::uint64_t size_bytes, const EnergyModelParams& params = {});

struct Table1Row {
    std::uint64_t m = 0;
    std::uint64_t mic = 0;
    std::uint64_t crc = 0;
    std::uint64_t keymix_case1 = 0;
    std::uint64_t keymix_case2 = 0;
    std::uint64_t rc4 = 0;
    std::uint64_t tkip_case1 = 0;
    std::uint64_t tkip_case2 = 0;
    friend bool operator==(const Table1Row&, const Table1Row&) = default;
};

/// Rows for m = 16, 32, ..., 128.
std::vector<Table1Row> table1();

std::string table1_csv(const std::vector<Table1Row>& rows);

/// Cells where the published reference table disagrees with the formulas.
struct Table1Deviation {
    std::uint64_t m;
    std::string column;
    std::uint64_t formula;
    std::uint64_t published;
};

std::vector<Table1Deviation> table1_deviations();

}  // namespace lotkip::cost
