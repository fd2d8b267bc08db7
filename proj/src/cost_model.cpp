#include "lotkip/cost_model.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace lotkip::cost {

OpCounts& OpCounts::operator+=(const OpCounts& o) {
    t_and += o.t_and;
    t_or += o.t_or;
    t_shift += o.t_shift;
    t_mem += o.t_mem;
    t_rot += o.t_rot;
    t_swap += o.t_swap;
    t_sub += o.t_sub;
    return *this;
}

OpCounts operator*(std::uint64_t k, const OpCounts& c) {
    return {k * c.t_and, k * c.t_or, k * c.t_shift, k * c.t_mem, k * c.t_rot, k * c.t_swap, k * c.t_sub};
}

double weighted_total(const OpCounts& c, const CostWeights& w) {
    return w.w_and * static_cast<double>(c.t_and) + w.w_or * static_cast<double>(c.t_or) +
           w.w_shift * static_cast<double>(c.t_shift) + w.w_mem * static_cast<double>(c.t_mem) +
           w.w_rot * static_cast<double>(c.t_rot) + w.w_swap * static_cast<double>(c.t_swap) +
           w.w_sub * static_cast<double>(c.t_sub);
}

namespace {

constexpr std::uint64_t ceil_div(std::uint64_t a, std::uint64_t b) { return (a + b - 1) / b; }

// Per-byte key-mixing cost without caching, and the cached per-block
// increment.
constexpr OpCounts kKeyMixPerByte{3495, 1748, 0, 6, 12, 0, 0};
constexpr OpCounts kCachedBlockIncrement{584, 292, 0, 1, 1, 0, 0};

}  // namespace

OpCounts mic_cycles(std::uint64_t m) {
    const std::uint64_t n = ceil_div(m, 4);
    return {104 * n, 52 * n, 19 * n, 0, 0, 0, 0};
}

OpCounts crc_cycles(std::uint64_t m) { return {4 * m + 2, 2 * m + 1, m, m, 0, 0, 0}; }

OpCounts phase1_cycles(unsigned loop_count) {
    // 2570 XOR up front, then 2590 XOR + 10 substitutions per loop; one XOR
    // is costed as 2 AND + 1 OR.
    const std::uint64_t xors = 2570 + 2590ull * loop_count;
    return {2 * xors, xors, 0, 10ull * loop_count, 0, 0, 0};
}

OpCounts phase2_cycles() { return {9341, 4671, 0, 12, 12, 0, 0}; }

OpCounts keymix_cycles(std::uint64_t m, KeyMixCase mode, bool first_packet) {
    if (m == 0) throw std::invalid_argument("key-mixing cost needs at least one byte");
    const std::uint64_t blocks = ceil_div(m, kKeystreamBlockBytes);
    const OpCounts full_block = kKeystreamBlockBytes * kKeyMixPerByte;
    if (mode == KeyMixCase::NoCache) return blocks * full_block;
    if (!first_packet) return blocks * kCachedBlockIncrement;
    return full_block + (blocks - 1) * kCachedBlockIncrement;
}

OpCounts rc4_cycles(std::uint64_t m) {
    // KSA, then per byte the PRGA step plus the output XOR.
    return {2064 + 8 * m, 512 + 4 * m, 0, 0, 0, 256 + m, m};
}

std::uint64_t tkip_cycles(std::uint64_t m, KeyMixCase mode) {
    return (mic_cycles(m) + crc_cycles(m) + keymix_cycles(m, mode) + rc4_cycles(m)).total();
}

std::uint64_t tkip_energy_cycles(std::uint64_t m, KeyMixCase mode, bool first_packet) {
    const std::uint64_t n = std::max<std::uint64_t>(1, m / 32);
    const std::uint64_t per_byte = (mode == KeyMixCase::Cache && !first_packet) ? 1764 : 5283;
    return 175 * n + per_byte * m + 2835;
}

double tkip_energy_uj(std::uint64_t m, KeyMixCase mode, bool first_packet, const EnergyModelParams& params) {
    return static_cast<double>(tkip_energy_cycles(m, mode, first_packet)) * params.cycle_energy_uj;
}

double tx_energy_uj(std::uint64_t size_bytes, const EnergyModelParams& params) {
    return params.tx_fixed_uj + params.tx_per_byte_uj * static_cast<double>(size_bytes);
}

double rx_energy_uj(std::uint64_t size_bytes, const EnergyModelParams& params) {
    return params.rx_fixed_uj + params.rx_per_byte_uj * static_cast<double>(size_bytes);
}

std::vector<Table1Row> table1() {
    std::vector<Table1Row> rows;
    for (std::uint64_t m = 16; m <= 128; m += 16) {
        Table1Row r;
        r.m = m;
        r.mic = mic_cycles(m).total();
        r.crc = crc_cycles(m).total();
        r.keymix_case1 = keymix_cycles(m, KeyMixCase::NoCache).total();
        r.keymix_case2 = keymix_cycles(m, KeyMixCase::Cache).total();
        r.rc4 = rc4_cycles(m).total();
        r.tkip_case1 = tkip_cycles(m, KeyMixCase::NoCache);
        r.tkip_case2 = tkip_cycles(m, KeyMixCase::Cache);
        rows.push_back(r);
    }
    return rows;
}

std::string table1_csv(const std::vector<Table1Row>& rows) {
    std::ostringstream out;
    out << "m,mic,crc,keymix_case1,keymix_case2,rc4,tkip_case1,tkip_case2\n";
    for (const auto& r : rows) {
        out << r.m << ',' << r.mic << ',' << r.crc << ',' << r.keymix_case1 << ',' << r.keymix_case2 << ','
            << r.rc4 << ',' << r.tkip_case1 << ',' << r.tkip_case2 << '\n';
    }
    return out.str();
}

std::vector<Table1Deviation> table1_deviations() {
    // The published m=80 Case-2 cells are 20 cycles below 84176 + 4*878.
    return {
        {80, "keymix_case2", keymix_cycles(80, KeyMixCase::Cache).total(), 87668},
        {80, "tkip_case2", tkip_cycles(80, KeyMixCase::Cache), 95763},
    };
}

}  // namespace lotkip::cost
