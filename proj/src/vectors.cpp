#include "lotkip/vectors.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "lotkip/bytes.hpp"
#include "lotkip/tkip_crypto.hpp"

namespace lotkip::vectors {

namespace {

using Fields = std::vector<std::string>;
using crypto::Tsc48;

constexpr std::size_t kMaxReported = 5;

std::uint64_t hex_u64(const std::string& s) {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used, 16);
    if (used != s.size()) throw std::invalid_argument("bad hex integer '" + s + "'");
    return v;
}

crypto::Ttak ttak_from_hex(const std::string& s) {
    if (s.size() != 20) throw std::invalid_argument("TTAK needs 20 hex digits");
    crypto::Ttak t;
    for (std::size_t i = 0; i < 5; ++i) t.words[i] = static_cast<std::uint16_t>(hex_u64(s.substr(4 * i, 4)));
    return t;
}

std::string ttak_to_hex(const crypto::Ttak& t) {
    std::string out;
    char buf[5];
    for (auto w : t.words) {
        std::snprintf(buf, sizeof buf, "%04x", w);
        out += buf;
    }
    return out;
}

std::string hex32(std::uint32_t v) {
    char buf[9];
    std::snprintf(buf, sizeof buf, "%08x", v);
    return buf;
}

// Returns the computed value as text; the last field is the expectation.
using Checker = std::function<std::string(const Fields&)>;

struct FileFormat {
    std::size_t fields;
    Checker compute;
};

FileFormat format_for(const std::string& name) {
    if (name == "michael_block.txt") {
        return {4, [](const Fields& f) {
                    const auto s = crypto::michael_block({static_cast<std::uint32_t>(hex_u64(f[0])),
                                                          static_cast<std::uint32_t>(hex_u64(f[1]))});
                    return hex32(s.l) + " " + hex32(s.r);
                }};
    }
    if (name == "michael.txt") {
        return {7, [](const Fields& f) {
                    crypto::MicHeader h;
                    h.sa.bytes = fixed_from_hex<6>(f[1]);
                    h.da.bytes = fixed_from_hex<6>(f[2]);
                    h.priority = static_cast<std::uint8_t>(hex_u64(f[3]));
                    if (f[4] != "-") h.iv = Tsc48(hex_u64(f[4]));
                    const auto key = crypto::MichaelKey::from_bytes(fixed_from_hex<8>(f[0]));
                    const auto tag = crypto::michael_mic(key, h, from_hex(f[5]));
                    return to_hex(tag);
                }};
    }
    if (name == "crc32.txt") {
        return {2, [](const Fields& f) { return to_hex(crypto::crc32_icv(from_hex(f[0]))); }};
    }
    if (name == "phase1.txt") {
        return {4, [](const Fields& f) {
                    crypto::TemporalKey tk{fixed_from_hex<16>(f[0])};
                    crypto::MacAddress ta{fixed_from_hex<6>(f[1])};
                    return ttak_to_hex(crypto::phase1_mix(tk, ta, static_cast<std::uint32_t>(hex_u64(f[2]))));
                }};
    }
    if (name == "phase2.txt") {
        return {4, [](const Fields& f) {
                    crypto::TemporalKey tk{fixed_from_hex<16>(f[1])};
                    return to_hex(
                        crypto::phase2_mix(ttak_from_hex(f[0]), tk, static_cast<std::uint16_t>(hex_u64(f[2]))));
                }};
    }
    if (name == "rc4.txt") {
        return {3, [](const Fields& f) { return to_hex(crypto::rc4_apply(from_hex(f[0]), from_hex(f[1]))); }};
    }
    throw std::runtime_error("unknown vector file '" + name + "'");
}

// michael_block stores two output words in two fields.
std::string expected_of(const std::string& name, const Fields& f) {
    if (name == "michael_block.txt") return f[2] + " " + f[3];
    return f.back();
}

}  // namespace

FileReport check_file(const std::string& dir, const std::string& name) {
    const FileFormat format = format_for(name);
    FileReport report;
    report.name = name;
    std::ifstream in(dir + "/" + name);
    if (!in) {
        report.missing = true;
        return report;
    }
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        Fields f;
        for (std::string tok; ss >> tok;) f.push_back(tok);
        if (f.size() != format.fields) {
            throw std::runtime_error(name + ":" + std::to_string(lineno) + ": expected " +
                                     std::to_string(format.fields) + " fields");
        }
        std::string got;
        try {
            got = format.compute(f);
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(name + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (got.empty()) got = "-";
        ++report.cases;
        const std::string want = expected_of(name, f);
        if (got != want) {
            ++report.mismatches;
            if (report.first_failures.size() < kMaxReported) {
                report.first_failures.push_back("line " + std::to_string(lineno) + ": want " + want + " got " + got);
            }
        }
    }
    return report;
}

std::vector<FileReport> check_directory(const std::string& dir) {
    std::vector<FileReport> out;
    for (const auto& name : kVectorFiles) out.push_back(check_file(dir, name));
    return out;
}

}  // namespace lotkip::vectors
